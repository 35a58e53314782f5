from dataclasses import dataclass
from typing import Iterator, List, Union


class ParseError(ValueError):
    """Malformed input, positioned at a 1-based line and column"""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class Atom:
    """A single token. kind is one of symbol, keyword, numeral, decimal, binary, hex, string."""
    text: str
    kind: str
    line: int
    column: int

    def __str__(self) -> str:
        return self.text


class SList(list):
    """A parenthesized list that remembers where it was opened"""

    def __init__(self, line: int, column: int):
        super().__init__()
        self.line = line
        self.column = column


SExpr = Union[Atom, SList]

_DELIMITERS = set(' \t\r\n();"|')


class SexprReader:
    """Reader for SMT-LIB 2 s-expressions"""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def _advance(self) -> str:
        char = self.text[self.pos]
        self.pos += 1
        if char == '\n':
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return char

    def _skip_blank(self):
        while self.pos < len(self.text):
            char = self.text[self.pos]
            if char in ' \t\r\n':
                self._advance()
            elif char == ';':
                while self.pos < len(self.text) and self.text[self.pos] != '\n':
                    self._advance()
            else:
                return

    def _read_atom(self) -> Atom:
        line, column = self.line, self.column
        char = self.text[self.pos]

        if char == '"':
            self._advance()
            chars = []
            while True:
                if self.pos >= len(self.text):
                    raise ParseError(line, column, "unexpected end of input inside string literal")
                c = self._advance()
                if c == '"':
                    # "" is an escaped quote in SMT-LIB 2.6
                    if self.pos < len(self.text) and self.text[self.pos] == '"':
                        chars.append(self._advance())
                        continue
                    return Atom(''.join(chars), 'string', line, column)
                chars.append(c)

        if char == '|':
            self._advance()
            chars = []
            while True:
                if self.pos >= len(self.text):
                    raise ParseError(line, column, "unexpected end of input inside quoted symbol")
                c = self._advance()
                if c == '|':
                    return Atom(''.join(chars), 'symbol', line, column)
                if c == '\\':
                    raise ParseError(self.line, self.column - 1, "backslash is not allowed in quoted symbols")
                chars.append(c)

        chars = []
        while self.pos < len(self.text) and self.text[self.pos] not in _DELIMITERS:
            chars.append(self._advance())
        token = ''.join(chars)
        return Atom(token, self._classify(token, line, column), line, column)

    @staticmethod
    def _classify(token: str, line: int, column: int) -> str:
        if token.startswith(':'):
            return 'keyword'
        if token.startswith('#b'):
            if len(token) < 3 or set(token[2:]) - set('01'):
                raise ParseError(line, column, f"invalid binary literal '{token}'")
            return 'binary'
        if token.startswith('#x'):
            if len(token) < 3 or set(token[2:].lower()) - set('0123456789abcdef'):
                raise ParseError(line, column, f"invalid hexadecimal literal '{token}'")
            return 'hex'
        if token[0].isdigit():
            if token.isdigit():
                if len(token) > 1 and token[0] == '0':
                    raise ParseError(line, column, f"numeral with leading zero '{token}'")
                return 'numeral'
            whole, dot, frac = token.partition('.')
            if dot and whole.isdigit() and frac.isdigit():
                return 'decimal'
            raise ParseError(line, column, f"invalid numeric literal '{token}'")
        return 'symbol'

    def read(self) -> Iterator[SExpr]:
        """Yield top-level expressions in order"""
        stack: List[SList] = []
        while True:
            self._skip_blank()
            if self.pos >= len(self.text):
                if stack:
                    opened = stack[-1]
                    raise ParseError(opened.line, opened.column, "unbalanced '(' at end of input")
                return
            char = self.text[self.pos]
            if char == '(':
                stack.append(SList(self.line, self.column))
                self._advance()
                continue
            if char == ')':
                if not stack:
                    raise ParseError(self.line, self.column, "unexpected ')'")
                self._advance()
                done = stack.pop()
                if stack:
                    stack[-1].append(done)
                else:
                    yield done
                continue
            atom = self._read_atom()
            if stack:
                stack[-1].append(atom)
            else:
                yield atom


def read_all(text: str) -> List[SExpr]:
    return list(SexprReader(text).read())
