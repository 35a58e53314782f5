"""
Minimal stand-in solver for process adapter tests.

Reads one query from stdin or from the path given as last argument. Reports
unsat with a core when the strict comparisons between variables form a cycle
or when some clause is (distinct v v); reports sat otherwise.
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.append(str(Path(__file__).parent.parent.parent / "src"))

from parsers.smtlib_parser import parse_query_file, to_formula
from terms.term import Apply, Variable


def _edges(formula):
    for index, clause in enumerate(formula.clauses):
        term = clause.term
        if not isinstance(term, Apply) or len(term.args) != 2:
            continue
        left, right = term.args
        if not (isinstance(left, Variable) and isinstance(right, Variable)):
            continue
        if term.op == 'distinct' and left == right:
            yield index, None, None
        elif term.op == '>':
            yield index, left, right
        elif term.op == '<':
            yield index, right, left


def find_core(formula):
    graph = {}
    for index, source, target in _edges(formula):
        if source is None:
            return [index]
        graph.setdefault(source, []).append((target, index))

    def walk(node, path, on_path):
        for target, index in graph.get(node, ()):
            if target in on_path:
                start = on_path[target]
                return path[start:] + [index]
            on_path[target] = len(path) + 1
            found = walk(target, path + [index], on_path)
            if found:
                return found
            del on_path[target]
        return None

    for node in list(graph):
        found = walk(node, [], {node: 0})
        if found:
            return found
    return None


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument('--no-core', action='store_true')
    parser.add_argument('--crash', action='store_true')
    parser.add_argument('--garbage', action='store_true')
    parser.add_argument('--sleep', type=float, default=0.0)
    parser.add_argument('path', nargs='?')
    args = parser.parse_args()

    if args.sleep:
        time.sleep(args.sleep)
    if args.crash:
        sys.stderr.write('fake solver: segmentation fault\n')
        sys.exit(3)
    if args.garbage:
        print('hello')
        return

    data = Path(args.path).read_bytes() if args.path else sys.stdin.buffer.read()
    formula = to_formula(parse_query_file(data, args.path or '<stdin>'))
    core = find_core(formula)
    if core is None:
        print('sat')
        print('(error "unsat core is not available")')
    elif args.no_core:
        print('unsat')
        print('(error "unsat core production is disabled")')
    else:
        print('unsat')
        print('(' + ' '.join(f'k{i}' for i in sorted(core)) + ')')


if __name__ == '__main__':
    main()
