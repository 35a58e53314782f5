import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Tuple, Union

from terms.term import Formula
from .smtlib_parser import QueryFile, parse_query_file, to_formula

logger = logging.getLogger(__name__)

SUITE_EXTENSION = '.smt2'


class EmptySuite(ValueError):
    """A suite directory without any .smt2 file"""


@dataclass(frozen=True)
class Suite:
    """Ordered query stream; the lifetime of one cache store"""
    id: str
    files: Tuple[QueryFile, ...]
    root: str = ''

    def formulas(self) -> Iterator[Formula]:
        for index, query in enumerate(self.files):
            yield to_formula(query, index)

    def __len__(self) -> int:
        return len(self.files)


def load_suite(directory: Union[str, Path]) -> Suite:
    """Parse every .smt2 file below directory, ordered by relative path"""
    root = Path(directory)
    if not root.exists():
        raise FileNotFoundError(f"Suite directory not found: {root}")
    if not root.is_dir():
        raise NotADirectoryError(f"Suite path is not a directory: {root}")

    paths = sorted(
        (p for p in root.rglob(f'*{SUITE_EXTENSION}') if p.is_file()),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    if not paths:
        raise EmptySuite(f"No {SUITE_EXTENSION} files in {root}")

    files = []
    for path in paths:
        relative = path.relative_to(root).as_posix()
        files.append(parse_query_file(path.read_bytes(), relative))
    logger.info(f"Loaded suite {root.name} with {len(files)} files")
    return Suite(root.name, tuple(files), str(root))
