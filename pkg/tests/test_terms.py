import unittest
import sys
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from terms.sorts import BOOL, INT, REAL, BitVecSort, FloatingPointSort, ArraySort, Sort
from terms.term import (
    Apply, Binder, CaptureError, Clause, Constant, NonInjectiveError, SortError, Substitution,
    SubstitutionSortError, Variable, alpha_rename_free, apply_substitution, compose, conjoin,
    flatten_conjunction, free_variables, shape,
)

x, y, z = Variable('x', INT), Variable('y', INT), Variable('z', INT)
a, b, c, d = (Variable(n, INT) for n in 'abcd')
u, v = Variable('u', INT), Variable('v', INT)


def gt(left, right):
    return Apply(BOOL, '>', (left, right))


def conj(*args):
    return Apply(BOOL, 'and', args)


class TestSorts(unittest.TestCase):

    def test_structural_equality(self):
        self.assertEqual(BitVecSort(8), BitVecSort(8))
        self.assertNotEqual(BitVecSort(8), BitVecSort(16))
        self.assertEqual(ArraySort(INT, REAL), ArraySort(INT, REAL))

    def test_invalid_widths(self):
        with self.assertRaises(ValueError):
            BitVecSort(0)
        with self.assertRaises(ValueError):
            FloatingPointSort(1, 4)

    def test_base_sort_is_abstract(self):
        with self.assertRaises(TypeError):
            Sort()

    def test_str_is_smtlib_spelling(self):
        self.assertEqual(str(ArraySort(INT, BitVecSort(8))), '(Array Int (_ BitVec 8))')


class TestTermConstruction(unittest.TestCase):

    def test_apply_needs_arguments(self):
        with self.assertRaises(ValueError):
            Apply(BOOL, 'and', ())

    def test_binder_validation(self):
        with self.assertRaises(ValueError):
            Binder('forall', (), gt(x, y))
        with self.assertRaises(ValueError):
            Binder('forall', (u, u), gt(u, x))
        with self.assertRaises(ValueError):
            Binder('some', (u,), gt(u, x))

    def test_clause_must_be_bool(self):
        with self.assertRaises(SortError):
            Clause.of(Apply(INT, '+', (x, y)))


class TestFlattenConjunction(unittest.TestCase):

    def test_nested_conjunction(self):
        root = conj(gt(x, y), conj(gt(y, z), gt(z, x)))
        clauses = flatten_conjunction(root)
        self.assertEqual([cl.term for cl in clauses], [gt(x, y), gt(y, z), gt(z, x)])

    def test_single_clause(self):
        self.assertEqual([cl.term for cl in flatten_conjunction(gt(x, y))], [gt(x, y)])

    def test_eq2_order(self):
        root = conj(gt(b, c), gt(c, d), gt(d, b), gt(a, b))
        self.assertEqual([cl.term for cl in flatten_conjunction(root)], [gt(b, c), gt(c, d), gt(d, b), gt(a, b)])

    def test_idempotent(self):
        clauses = flatten_conjunction(conj(gt(x, y), conj(gt(y, z), gt(z, x))))
        self.assertEqual(flatten_conjunction(conjoin(clauses)), clauses)

    def test_non_bool_root(self):
        with self.assertRaises(SortError):
            flatten_conjunction(x)

    def test_empty_conjunction_is_true(self):
        self.assertEqual(conjoin([]), Constant(BOOL, 'true'))

    def test_conjoin_single_clause(self):
        self.assertEqual(conjoin([Clause.of(gt(x, y))]), gt(x, y))


class TestSubstitution(unittest.TestCase):

    def test_apply(self):
        clause = Clause.of(gt(x, y))
        self.assertEqual(apply_substitution(clause, Substitution({x: b, y: c})).term, gt(b, c))

    def test_apply_identity(self):
        clause = Clause.of(gt(x, y))
        self.assertEqual(apply_substitution(clause, Substitution()), clause)

    def test_bound_variable_untouched(self):
        clause = Clause.of(Binder('forall', (u,), gt(u, x)))
        renamed = apply_substitution(clause, Substitution({x: y}))
        self.assertEqual(renamed.term, Binder('forall', (u,), gt(u, y)))

    def test_capture(self):
        clause = Clause.of(Binder('forall', (u,), gt(u, x)))
        with self.assertRaises(CaptureError):
            apply_substitution(clause, Substitution({x: u}))

    def test_sort_preserving(self):
        with self.assertRaises(SubstitutionSortError):
            Substitution({x: Variable('r', REAL)})

    def test_non_injective_allowed(self):
        s = Substitution({x: a, y: a})
        self.assertEqual(apply_substitution(Clause.of(gt(x, y)), s).term, gt(a, a))
        self.assertFalse(s.is_injective_on([x, y]))

    def test_composition(self):
        clause = Clause.of(gt(x, y))
        s1 = Substitution({x: a, y: b})
        s2 = Substitution({a: c, b: d})
        twice = apply_substitution(apply_substitution(clause, s1), s2)
        self.assertEqual(twice, apply_substitution(clause, compose(s2, s1)))

    def test_free_vars_follow_image(self):
        clause = Clause.of(conj(gt(x, y), gt(y, z)))
        s = Substitution({x: a, y: a, z: b})
        self.assertEqual(set(apply_substitution(clause, s).free_vars), {s.image(w) for w in clause.free_vars})

    def test_shape_preserved(self):
        clause = Clause.of(Binder('exists', (u,), conj(gt(u, x), gt(x, Constant(INT, '3')))))
        self.assertEqual(shape(apply_substitution(clause, Substitution({x: y})).term), shape(clause.term))


class TestAlphaRenameFree(unittest.TestCase):

    def test_rename(self):
        p, q = Variable('p', INT), Variable('q', INT)
        self.assertEqual(alpha_rename_free(Clause.of(gt(x, y)), Substitution({x: p, y: q})).term, gt(p, q))

    def test_repeated_variable(self):
        p = Variable('p', INT)
        self.assertEqual(alpha_rename_free(Clause.of(gt(x, x)), Substitution({x: p})).term, gt(p, p))

    def test_swap(self):
        self.assertEqual(alpha_rename_free(Clause.of(gt(x, y)), Substitution({x: y, y: x})).term, gt(y, x))

    def test_non_injective(self):
        with self.assertRaises(NonInjectiveError):
            alpha_rename_free(Clause.of(gt(x, y)), Substitution({x: a, y: a}))


class TestFreeVariables(unittest.TestCase):

    def test_order(self):
        self.assertEqual(free_variables(gt(x, y)), (x, y))

    def test_bound_excluded(self):
        self.assertEqual(free_variables(Binder('forall', (x,), gt(x, y))), (y,))

    def test_shadowing(self):
        term = Binder('forall', (x,), conj(gt(x, y), gt(x, x)))
        self.assertEqual(free_variables(term), (y,))

    def test_outer_occurrence_kept(self):
        term = conj(gt(x, z), Binder('forall', (x,), gt(x, y)))
        self.assertEqual(free_variables(term), (x, z, y))


if __name__ == '__main__':
    unittest.main()
