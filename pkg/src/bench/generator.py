"""Deterministic synthetic suites with ground truth known by construction"""
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from parsers.smtlib_printer import print_query
from parsers.suite_loader import Suite, load_suite
from terms.sorts import INT
from terms.term import Apply, Clause, Constant, Formula
from .instances import chain, cycle, ivar, quantified_gt, relation

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'
_LETTERS = 'abcdefghijklmnopqrstuvwxyz'


@dataclass(frozen=True)
class GeneratorParams:
    files: int = 200
    unsat_share: float = 0.6
    quantified_share: float = 0.2
    min_cycle: int = 3
    max_cycle: int = 5
    min_chain: int = 3
    max_chain: int = 6
    max_filler: int = 5

    def __post_init__(self):
        if self.files < 1:
            raise ValueError(f"files must be positive, got {self.files}")
        if not 0.0 <= self.unsat_share <= 1.0 or not 0.0 <= self.quantified_share <= 1.0:
            raise ValueError("unsat_share and quantified_share must lie in [0, 1]")
        if not 2 <= self.min_cycle <= self.max_cycle:
            raise ValueError(f"Invalid cycle length range {self.min_cycle}..{self.max_cycle}")
        if not 2 <= self.min_chain <= self.max_chain:
            raise ValueError(f"Invalid chain length range {self.min_chain}..{self.max_chain}")
        if self.max_filler < 0:
            raise ValueError(f"max_filler must not be negative, got {self.max_filler}")

    @classmethod
    def from_settings(cls, settings, **overrides) -> 'GeneratorParams':
        values = {name: settings.get(f'generator.{name}') for name in cls.__dataclass_fields__}
        values.update(overrides)
        return cls(**{k: v for k, v in values.items() if v is not None})


class _Names:
    """Fresh variable names, unique within one file"""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.used = set()

    def take(self, count: int) -> List[str]:
        names = []
        while len(names) < count:
            name = f'{self.rng.choice(_LETTERS)}{self.rng.randint(0, 99)}'
            if name not in self.used:
                self.used.add(name)
                names.append(name)
        return names


def _filler(rng: random.Random, names: _Names) -> Clause:
    """A clause over fresh variables that is satisfiable on its own"""
    kind = rng.randrange(4)
    if kind == 0:
        (f,) = names.take(1)
        return relation('>=', ivar(f), Constant(INT, str(rng.randint(0, 50))))
    if kind == 1:
        (f,) = names.take(1)
        return relation('<=', ivar(f), Constant(INT, str(rng.randint(0, 50))))
    f, g = names.take(2)
    if kind == 2:
        return relation('distinct', ivar(f), ivar(g))
    return relation('=', ivar(g), Apply(INT, '+', (ivar(f), Constant(INT, '1'))))


def _edge_clauses(endpoints: List[Tuple[str, str]], op: str, quantified: bool, names: _Names) -> List[Clause]:
    if quantified:
        return [quantified_gt(a, b, names.take(1)[0]) for a, b in endpoints]
    return [relation(op, ivar(a), ivar(b)) for a, b in endpoints]


def _unsat_file(rng: random.Random, params: GeneratorParams, quantified: bool) -> Tuple[List[Clause], List[int]]:
    names = _Names(rng)
    length = rng.randint(params.min_cycle, params.max_cycle)
    vars_ = names.take(length)
    op = '>' if quantified else rng.choice(('>', '<'))
    core = cycle(vars_, op)
    if quantified:
        core = _edge_clauses([(c.free_vars[0].name, c.free_vars[1].name) for c in core], op, True, names)
    fillers = [_filler(rng, names) for _ in range(rng.randint(0, params.max_filler))]
    tagged = [(c, True) for c in core] + [(c, False) for c in fillers]
    rng.shuffle(tagged)
    return [c for c, _ in tagged], [i for i, (_, in_core) in enumerate(tagged) if in_core]


def _sat_file(rng: random.Random, params: GeneratorParams, quantified: bool) -> List[Clause]:
    names = _Names(rng)
    vars_ = names.take(rng.randint(params.min_chain, params.max_chain))
    clauses = chain(vars_)
    if quantified:
        clauses = _edge_clauses(list(zip(vars_, vars_[1:])), '>', True, names)
    clauses += [_filler(rng, names) for _ in range(rng.randint(0, params.max_filler))]
    rng.shuffle(clauses)
    return clauses


def generate_files(seed: int, params: GeneratorParams) -> Tuple[Dict[str, bytes], Dict[str, Dict[str, Any]]]:
    """File contents and oracle manifest, keyed by relative path"""
    rng = random.Random(seed)
    files: Dict[str, bytes] = {}
    manifest: Dict[str, Dict[str, Any]] = {}
    for index in range(params.files):
        quantified = rng.random() < params.quantified_share
        unsat = rng.random() < params.unsat_share
        kind = ('q' if quantified else '') + ('cycle' if unsat else 'chain')
        path = f'{index:04d}_{kind}.smt2'
        if unsat:
            clauses, core = _unsat_file(rng, params, quantified)
            entry = {'status': 'unsat', 'core': core}
        else:
            clauses = _sat_file(rng, params, quantified)
            entry = {'status': 'sat'}
        entry['nanos'] = rng.randint(200, 5000) * 1000 * len(clauses)
        files[path] = print_query(Formula(tuple(clauses), path, index))
        manifest[path] = entry
    return files, manifest


def generate_synthetic_suite(seed: int, out: Union[str, Path], params: GeneratorParams = GeneratorParams()) -> Suite:
    """Write seeded .smt2 files plus manifest.json to out and load them back as a suite"""
    root = Path(out)
    root.mkdir(parents=True, exist_ok=True)
    files, manifest = generate_files(seed, params)
    for path, data in files.items():
        (root / path).write_bytes(data)
    (root / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2, sort_keys=True) + '\n', encoding='utf-8')
    logger.info(f"Generated {len(files)} files with seed {seed} in {root}")
    return load_suite(root)
