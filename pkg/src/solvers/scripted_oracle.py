import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

from jsonschema import Draft7Validator

from terms.term import Formula
from .base import SolveResult, SolveStatus, SolverBackend, check_core_indices

logger = logging.getLogger(__name__)

MANIFEST_SCHEMA = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'type': 'object',
    'additionalProperties': {
        'type': 'object',
        'required': ['status'],
        'properties': {
            'status': {'enum': ['sat', 'unsat', 'unknown']},
            'core': {'type': 'array', 'items': {'type': 'integer', 'minimum': 0}, 'uniqueItems': True},
            'nanos': {'type': 'integer', 'minimum': 0},
        },
        'additionalProperties': False,
    },
}


class ManifestError(ValueError):
    """Oracle manifest does not match the manifest schema"""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("Invalid oracle manifest: " + '; '.join(self.errors))


class ManifestMiss(KeyError):
    """A formula the manifest has no entry for"""

    def __init__(self, origin: str):
        super().__init__(origin)
        self.origin = origin

    def __str__(self) -> str:
        return f"No oracle manifest entry for '{self.origin}'"


def validate_manifest(manifest: Any):
    validator = Draft7Validator(MANIFEST_SCHEMA)
    errors = sorted(validator.iter_errors(manifest), key=lambda e: list(e.absolute_path))
    if errors:
        raise ManifestError(
            f"{'/'.join(str(p) for p in e.absolute_path) or '<root>'}: {e.message}" for e in errors
        )


class ScriptedOracle(SolverBackend):
    """
    Deterministic solver stand-in answering from a manifest keyed by relative file path.

    validate_core cannot re-solve an arbitrary clause subset; it accepts a subset
    exactly when it contains the scripted core.
    """

    def __init__(self, manifest: Dict[str, Dict[str, Any]]):
        super().__init__('oracle')
        validate_manifest(manifest)
        self.manifest = manifest

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'ScriptedOracle':
        with open(path, 'r', encoding='utf-8') as f:
            manifest = json.load(f)
        logger.info(f"Loaded oracle manifest with {len(manifest)} entries from {path}")
        return cls(manifest)

    def _entry(self, formula: Formula) -> Dict[str, Any]:
        entry = self.manifest.get(formula.origin)
        if entry is None:
            raise ManifestMiss(formula.origin)
        return entry

    def solve(self, formula: Formula, timeout: Optional[float] = None) -> SolveResult:
        entry = self._entry(formula)
        status = SolveStatus(entry['status'])
        nanos = entry.get('nanos', 0)
        if status is not SolveStatus.UNSAT:
            return SolveResult(status, frozenset(), nanos)
        core = entry.get('core') or range(len(formula))
        return SolveResult(status, check_core_indices(formula, core), nanos)

    def validate_core(self, formula: Formula, indices: Iterable[int], timeout: Optional[float] = None) -> bool:
        indices = check_core_indices(formula, indices)
        result = self.solve(formula, timeout)
        return result.is_unsat and result.core <= indices
