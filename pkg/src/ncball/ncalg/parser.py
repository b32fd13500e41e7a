"""Recursive-descent parser for the command-line expression language.

Grammar (whitespace is insignificant)::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ["'"] ['^' integer]
    atom     := rational | 's' | 'q' | genname | '(' expr ')'
    genname  := ('z'|'w'|'x'|'t'|'e'|'f') integer
    rational := integer ['/' positive-integer]

Products are explicit: ``z1 z2`` is a syntax error, ``z1*z2`` is not.
A leading sign on ``expr`` is accepted in addition to the bare grammar.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from ..errors import ParseError, UnknownGenerator
from .poly import LETTERS, Generator, Polynomial
from .presentation import Presentation
from .scalar import Q, S, Scalar


class Token(NamedTuple):
    kind: str  # "int", "gen", "s", "q", or the operator character itself
    text: str
    pos: int


_OPERATORS = set("+-*/^'()")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], i))
            i = j
        elif ch in LETTERS:
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError(f"generator name {ch!r} needs an integer index", i)
            tokens.append(Token("gen", text[i:j], i))
            i = j
        elif ch in "sq":
            if i + 1 < len(text) and (text[i + 1].isalnum()):
                raise ParseError(f"unexpected identifier starting with {ch!r}", i)
            tokens.append(Token(ch, ch, i))
            i += 1
        elif ch in _OPERATORS:
            tokens.append(Token(ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, pres: Presentation | None):
        self.tokens = tokenize(text)
        self.i = 0
        self.pres = pres

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def take(self, kind: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {want}, found {got}", tok.pos)
        self.i += 1
        return tok

    def expr(self) -> Polynomial:
        sign = 1
        if self.tok.kind in ("+", "-"):
            sign = -1 if self.take(self.tok.kind).kind == "-" else 1
        result = self.term().scale(sign)
        while self.tok.kind in ("+", "-"):
            op = self.take(self.tok.kind).kind
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.tok.kind == "*":
            self.take("*")
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        start = self.tok.pos
        value = self.atom()
        if self.tok.kind == "'":
            self.take("'")
            value = value.adjoint()
        if self.tok.kind == "^":
            self.take("^")
            negative = False
            if self.tok.kind == "-":
                self.take("-")
                negative = True
            k = int(self.take("int").text)
            if negative:
                value = _invert(value, start)
            value = value**k
        return value

    def atom(self) -> Polynomial:
        tok = self.tok
        if tok.kind == "int":
            self.take("int")
            num = int(tok.text)
            if self.tok.kind == "/":
                self.take("/")
                den_tok = self.take("int")
                den = int(den_tok.text)
                if den == 0:
                    raise ParseError("denominator must be positive", den_tok.pos)
                return Polynomial.const(Fraction(num, den))
            return Polynomial.const(num)
        if tok.kind == "s":
            self.take("s")
            return Polynomial.const(S)
        if tok.kind == "q":
            self.take("q")
            return Polynomial.const(Q)
        if tok.kind == "gen":
            self.take("gen")
            g = Generator(tok.text[0], int(tok.text[1:]))
            if self.pres is not None and not self.pres.owns(g):
                raise UnknownGenerator(
                    f"generator {tok.text!r} (position {tok.pos}) is not in {self.pres.family}"
                )
            return Polynomial.gen(g.letter, g.index)
        if tok.kind == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        got = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"expected a number, s, q, a generator or '(', found {got}", tok.pos)


def _invert(value: Polynomial, pos: int) -> Polynomial:
    terms = list(value.items())
    if len(terms) == 1 and terms[0][0] == () and terms[0][1].is_monomial():
        return Polynomial.const(Scalar.const(1) / terms[0][1])
    raise ParseError("only monomial scalars can be raised to a negative power", pos)


def parse_expression(text: str, pres: Presentation | None = None) -> Polynomial:
    """Parse ``text`` into a Polynomial; generators are checked against ``pres`` when given."""
    parser = _Parser(text, pres)
    result = parser.expr()
    parser.take("end")
    return result
