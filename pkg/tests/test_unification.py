import unittest
import random
import sys
from pathlib import Path

from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from bench.instances import gt, ivar, motivating_formulas, random_clause, random_relation, random_renaming, relation
from fingerprint.hashing import clause_hash
from terms.sorts import BOOL, INT
from terms.term import Apply, Binder, Clause, Constant, Substitution, Variable, apply_substitution
from unification.unifier import unify, unify_many


def subst(**pairs) -> Substitution:
    return Substitution({ivar(k): ivar(v) for k, v in pairs.items()})


class TestUnify(unittest.TestCase):

    def test_simple_match(self):
        self.assertEqual(unify(gt('x', 'y'), gt('a', 'b')), subst(x='a', y='b'))

    def test_table_row(self):
        self.assertEqual(unify(gt('z', 'x'), gt('b', 'c')), subst(z='b', x='c'))

    def test_rebinding_conflict(self):
        self.assertIsNone(unify(gt('x', 'x'), gt('a', 'b')))

    def test_repeated_variable_consistent(self):
        self.assertEqual(unify(gt('x', 'x'), gt('a', 'a')), subst(x='a'))

    def test_non_injective_images(self):
        self.assertEqual(unify(gt('x', 'y'), gt('a', 'a')), subst(x='a', y='a'))

    def test_shape_mismatch(self):
        plus_one = Clause.of(Apply(BOOL, '>', (Apply(INT, '+', (ivar('x'), Constant(INT, '1'))), ivar('y'))))
        self.assertIsNone(unify(gt('x', 'y'), plus_one))

    def test_operator_mismatch(self):
        self.assertIsNone(unify(gt('x', 'y'), relation('<', ivar('y'), ivar('x'))))

    def test_constant_mismatch(self):
        five = relation('>', ivar('x'), Constant(INT, '5'))
        six = relation('>', ivar('a'), Constant(INT, '6'))
        self.assertIsNone(unify(five, six))
        self.assertEqual(unify(five, relation('>', ivar('a'), Constant(INT, '5'))), subst(x='a'))

    def test_sort_mismatch(self):
        bools = Clause.of(Apply(BOOL, '=', (Variable('p', BOOL), Variable('q', BOOL))))
        ints = relation('=', ivar('a'), ivar('b'))
        self.assertIsNone(unify(bools, ints))

    def test_binder_drops_bound_pairs(self):
        core = Clause.of(Binder('forall', (ivar('u'),), Apply(BOOL, '>', (ivar('u'), ivar('x')))))
        formula = Clause.of(Binder('forall', (ivar('v'),), Apply(BOOL, '>', (ivar('v'), ivar('y')))))
        self.assertEqual(unify(core, formula), subst(x='y'))

    def test_bound_does_not_match_free(self):
        core = Clause.of(Binder('forall', (ivar('u'),), Apply(BOOL, '>', (ivar('u'), ivar('x')))))
        formula = Clause.of(Binder('forall', (ivar('v'),), Apply(BOOL, '>', (ivar('y'), ivar('v')))))
        self.assertIsNone(unify(core, formula))

    def test_binder_kind_mismatch(self):
        body = Apply(BOOL, '>', (ivar('u'), ivar('x')))
        core = Clause.of(Binder('forall', (ivar('u'),), body))
        formula = Clause.of(Binder('exists', (ivar('u'),), body))
        self.assertIsNone(unify(core, formula))


class TestUnifyMany(unittest.TestCase):

    def test_table_row_one(self):
        eq2 = motivating_formulas()['eq2']
        matches = unify_many(gt('x', 'y'), eq2.clauses)
        self.assertEqual([i for i, _ in matches], [0, 1, 2, 3])
        self.assertEqual([s for _, s in matches], [
            subst(x='b', y='c'), subst(x='c', y='d'), subst(x='d', y='b'), subst(x='a', y='b'),
        ])

    def test_empty_candidates(self):
        self.assertEqual(unify_many(gt('x', 'y'), []), [])

    def test_no_structural_match(self):
        candidates = [relation('=', ivar('a'), ivar('b')), relation('<', ivar('a'), ivar('b'))]
        self.assertEqual(unify_many(gt('x', 'y'), candidates), [])


class TestUnifyProperties(unittest.TestCase):
    FREE = [ivar(f'x{i}') for i in range(4)] + [Variable('p', BOOL)]
    TARGETS = [ivar(f'a{i}') for i in range(3)] + [Variable('r', BOOL)]

    @given(st.integers(min_value=0, max_value=2 ** 32))
    @settings(max_examples=200, deadline=None, derandomize=True)
    def test_complete_on_renamings(self, seed):
        rng = random.Random(seed)
        clause = random_clause(rng, max_depth=5, free=self.FREE)
        renaming = random_renaming(rng, clause.free_vars, self.TARGETS)
        result = unify(clause, apply_substitution(clause, renaming))
        self.assertEqual(result, renaming.restrict(clause.free_vars))

    @given(st.integers(min_value=0, max_value=2 ** 32))
    @settings(max_examples=200, deadline=None, derandomize=True)
    def test_sound_and_hash_consistent(self, seed):
        rng = random.Random(seed)
        variables = [ivar(n) for n in 'abc']
        core, other = random_relation(rng, variables[:2]), random_relation(rng, variables)
        result = unify(core, other)
        if result is not None:
            self.assertEqual(apply_substitution(core, result).key, other.key)
            self.assertEqual(clause_hash(core), clause_hash(other))


if __name__ == '__main__':
    unittest.main()
