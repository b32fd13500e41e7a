"""Generators, words and polynomials of the free *-algebra over Laurent scalars."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, NamedTuple

from .scalar import ONE, Scalar

LETTERS = ("z", "w", "x", "t", "e", "f")


class Generator(NamedTuple):
    letter: str
    index: int
    starred: bool = False

    @property
    def label(self) -> str:
        return f"{self.letter}{self.index}"

    def adjoint(self) -> "Generator":
        return Generator(self.letter, self.index, not self.starred)

    def key(self) -> tuple[int, str, int]:
        # every starred letter sorts after every unstarred one
        return (int(self.starred), self.letter, self.index)

    def __str__(self) -> str:
        return self.label + ("'" if self.starred else "")


Word = tuple  # tuple[Generator, ...]


def word_key(word: Word) -> tuple:
    """Degree-lexicographic key; the termination order of the rewriting system."""
    return (len(word), tuple(g.key() for g in word))


def word_adjoint(word: Word) -> Word:
    return tuple(g.adjoint() for g in reversed(word))


def word_str(word: Word) -> str:
    return " ".join(str(g) for g in word) if word else "1"


class Polynomial:
    """Finite linear combination of words with Scalar coefficients (immutable)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | Iterable[tuple[Word, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, Scalar] = {}
        for w, c in items:
            c = c if isinstance(c, Scalar) else Scalar.const(c)
            prev = acc.get(w)
            acc[w] = c if prev is None else prev + c
        self._terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def gen(cls, letter: str, index: int, starred: bool = False) -> "Polynomial":
        return cls({(Generator(letter, index, starred),): ONE})

    @classmethod
    def word(cls, word: Word, coeff: Scalar = ONE) -> "Polynomial":
        return cls({tuple(word): coeff})

    @classmethod
    def const(cls, c: Scalar | int | Fraction) -> "Polynomial":
        return cls({(): c})

    @property
    def terms(self) -> dict[Word, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, word: Word) -> Scalar:
        return self._terms.get(tuple(word), Scalar())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (Scalar, Rational)):
            return self == Polynomial.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (Scalar, Rational)):
            return Polynomial.const(other)
        raise TypeError(f"cannot use {type(other).__name__} as a Polynomial")

    def __add__(self, other) -> "Polynomial":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return Polynomial(list(self._terms.items()) + list(o._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({w: -c for w, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (Scalar, Rational)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict[Word, Scalar] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                c = c1 * c2
                out[w] = out[w] + c if w in out else c
        return Polynomial(out)

    def __rmul__(self, other) -> "Polynomial":
        if isinstance(other, (Scalar, Rational)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Polynomial":
        c = c if isinstance(c, Scalar) else Scalar.const(c)
        return Polynomial({w: c * v for w, v in self._terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers of polynomials are undefined")
        result = Polynomial.const(1)
        for _ in range(k):
            result = result * self
        return result

    def adjoint(self) -> "Polynomial":
        return Polynomial({word_adjoint(w): c.conjugate() for w, c in self._terms.items()})

    def generators(self) -> set[tuple[str, int]]:
        return {(g.letter, g.index) for w in self._terms for g in w}

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def sorted_terms(self) -> list[tuple[Word, Scalar]]:
        """Terms ordered from the largest word (deglex) down to the unit."""
        return sorted(self._terms.items(), key=lambda t: word_key(t[0]), reverse=True)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for i, (w, c) in enumerate(self.sorted_terms()):
            negative, body = _term_str(w, c)
            if i == 0:
                parts.append(("- " if negative else "") + body)
            else:
                parts.append((" - " if negative else " + ") + body)
        return "".join(parts)


def _term_str(word: Word, c: Scalar) -> tuple[bool, str]:
    ws = " ".join(str(g) for g in word)
    if c.is_monomial():
        (e, r), = c.terms
        negative = r < 0
        mag = Scalar({e: abs(r)})
        if mag == ONE:
            return negative, ws or "1"
        return negative, f"{mag} {ws}" if ws else str(mag)
    coeff = f"({c})"
    return False, f"{coeff} {ws}" if ws else coeff
