"""Exact Laurent polynomials in s = q^(1/2) with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class Scalar:
    """An element of Q[s, s^-1] where s stands for q^(1/2).

    The representation is canonical (sorted exponents, no zero coefficients),
    so equality and hashing are structural. ``s`` is a real parameter in
    (0, 1), hence the involution of the *-algebra fixes every Scalar.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | Iterable[tuple[int, Number]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for exp, c in items:
            acc[exp] = acc.get(exp, Fraction(0)) + Fraction(c)
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        self._hash = hash(self._terms)

    @classmethod
    def const(cls, c: Number) -> "Scalar":
        return cls({0: c})

    @classmethod
    def s_power(cls, e: int, c: Number = 1) -> "Scalar":
        return cls({e: c})

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self._terms == other._terms
        if isinstance(other, Rational):
            return self._terms == Scalar.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    @staticmethod
    def _coerce(other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, Rational):
            return Scalar.const(other)
        raise TypeError(f"cannot use {type(other).__name__} as a Scalar")

    def __add__(self, other) -> "Scalar":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(list(self._terms) + list(o._terms))

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar((e, -c) for e, c in self._terms)

    def __sub__(self, other) -> "Scalar":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Scalar":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Scalar":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in o._terms:
                acc[e1 + e2] = acc.get(e1 + e2, Fraction(0)) + c1 * c2
        return Scalar(acc)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        o = self._coerce(other)
        if not o.is_monomial():
            raise ZeroDivisionError("only monomial Scalars are invertible")
        (e, c), = o._terms
        return self * Scalar({-e: 1 / c})

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return Scalar.const(1) / (self ** (-k))
        result = Scalar.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Scalar":
        return self

    def evaluate(self, q: float) -> float:
        s = q ** 0.5
        return sum(float(c) * s ** e for e, c in self._terms)

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for i, (e, c) in enumerate(self._terms):
            mag = _monomial_str(e, abs(c))
            if i == 0:
                out = ("-" if c < 0 else "") + mag
            else:
                out += (" - " if c < 0 else " + ") + mag
        return out


def _power_name(e: int) -> str:
    if e == 0:
        return ""
    if e % 2 == 0:
        return "q" if e == 2 else f"q^{e // 2}"
    return "s" if e == 1 else f"s^{e}"


def _monomial_str(e: int, c: Fraction) -> str:
    name = _power_name(e)
    if not name:
        return str(c)
    if c == 1:
        return name
    return f"{c} {name}"


S = Scalar.s_power(1)
Q = Scalar.s_power(2)
ONE = Scalar.const(1)
ZERO = Scalar()
