"""Presentations of the ball and boundary algebras by generators and oriented rules."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..errors import InvalidParameter
from .poly import Generator, Polynomial, Word, word_key, word_str
from .rewrite import Reducer, orient
from .scalar import ONE, Q, S, Scalar

FAMILY_KINDS = ("ball-even", "ball-odd", "boundary-even", "boundary-odd")
_LETTER = {"ball-even": "z", "boundary-even": "w", "ball-odd": "x", "boundary-odd": "t"}


@dataclass(frozen=True, order=True)
class Family:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise InvalidParameter(f"unknown family {self.kind!r}; expected one of {FAMILY_KINDS}")
        if not isinstance(self.n, int) or self.n < 0:
            raise InvalidParameter(f"family index must be a nonnegative integer, got {self.n!r}")

    @property
    def letter(self) -> str:
        return _LETTER[self.kind]

    @property
    def even(self) -> bool:
        return self.kind.endswith("even")

    @property
    def boundary(self) -> bool:
        return self.kind.startswith("boundary")

    @property
    def labels(self) -> list[str]:
        return [f"{self.letter}{i}" for i in range(1, self.n + 1)]

    def ball(self) -> "Family":
        return Family("ball-even" if self.even else "ball-odd", self.n)

    def boundary_family(self) -> "Family":
        return Family("boundary-even" if self.even else "boundary-odd", self.n)

    def __str__(self) -> str:
        return f"{self.kind}({self.n})"


@dataclass(frozen=True)
class Relation:
    """A named polynomial that must vanish."""

    name: str
    poly: Polynomial


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: Polynomial

    def __str__(self) -> str:
        return f"{word_str(self.lhs)} -> {self.rhs}"


@dataclass(frozen=True)
class Presentation:
    family: Family
    generators: tuple[str, ...]
    relations: tuple[Relation, ...]
    rules: tuple[RewriteRule, ...] = field(repr=False)

    @property
    def letter(self) -> str:
        return self.family.letter

    @property
    def n(self) -> int:
        return self.family.n

    def rule_map(self) -> dict[Word, Polynomial]:
        return {r.lhs: r.rhs for r in self.rules}

    @cached_property
    def reducer(self) -> Reducer:
        return Reducer(self.rule_map())

    def gen(self, i: int, starred: bool = False) -> Polynomial:
        return Polynomial.gen(self.letter, i, starred)

    def owns(self, g: Generator) -> bool:
        return g.letter == self.letter and 1 <= g.index <= self.n


def _gens(letter: str, n: int):
    def g(i: int, starred: bool = False) -> Polynomial:
        return Polynomial.gen(letter, i, starred)

    return g


def _even_relations(letter: str, n: int, sphere: bool) -> list[Relation]:
    g = _gens(letter, n)
    rels: list[Relation] = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rels.append(Relation(f"{letter}{i}{letter}{j} = s {letter}{j}{letter}{i}", g(i) * g(j) - S * (g(j) * g(i))))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rels.append(
                Relation(
                    f"{letter}{i}{letter}{j}' = s^-1 {letter}{j}'{letter}{i}",
                    g(i) * g(j, True) - S ** -1 * (g(j, True) * g(i)),
                )
            )
    for i in range(1, n + 1):
        tail = Polynomial.const(1) - _sum_outer(g, range(i + 1, n + 1))
        rels.append(
            Relation(
                f"{letter}{i}'{letter}{i} - q {letter}{i}{letter}{i}' = (1 - q)(1 - sum_j>{i})",
                g(i, True) * g(i) - Q * (g(i) * g(i, True)) - (ONE - Q) * tail,
            )
        )
    if sphere:
        rels.append(Relation(f"sum {letter}j{letter}j' = 1", _sum_outer(g, range(1, n + 1)) - 1))
    return rels


def _odd_relations(letter: str, n: int, sphere: bool) -> list[Relation]:
    g = _gens(letter, n)
    rels = [Relation(f"{letter}1 = {letter}1'", g(1) - g(1, True))]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rels.append(Relation(f"{letter}{i}{letter}{j} = s {letter}{j}{letter}{i}", g(i) * g(j) - S * (g(j) * g(i))))
    for i in range(2, n + 1):
        for j in range(i + 1, n + 1):
            rels.append(
                Relation(
                    f"{letter}{i}{letter}{j}' = s^-1 {letter}{j}'{letter}{i}",
                    g(i) * g(j, True) - S ** -1 * (g(j, True) * g(i)),
                )
            )
    for i in range(2, n + 1):
        tail = Polynomial.const(1) - _sum_outer(g, range(i + 1, n + 1))
        rels.append(
            Relation(
                f"{letter}{i}'{letter}{i} - q {letter}{i}{letter}{i}' = (1 - q)(1 - sum_j>{i})",
                g(i, True) * g(i) - Q * (g(i) * g(i, True)) - (ONE - Q) * tail,
            )
        )
    if sphere:
        rels.append(
            Relation(
                f"{letter}1^2 + sum_j>=2 {letter}j{letter}j' = 1",
                g(1) * g(1) + _sum_outer(g, range(2, n + 1)) - 1,
            )
        )
    return rels


def _sum_outer(g, indices) -> Polynomial:
    total = Polynomial()
    for j in indices:
        total = total + g(j) * g(j, True)
    return total


def autoreduce(polys: list[Polynomial]) -> dict[Word, Polynomial]:
    """Inter-reduce relation polynomials until every left side and right side is irreducible.

    The result generates the same two-sided ideal; duplicated relations (for
    instance a self-adjoint relation and its adjoint) collapse to one rule.
    """
    polys = [p for p in polys if p]
    while True:
        changed = False
        i = 0
        while i < len(polys):
            others = dict(orient(p) for k, p in enumerate(polys) if k != i)
            red = Reducer(others).reduce(polys[i])
            if not red:
                polys.pop(i)
                changed = True
                continue
            if red != polys[i]:
                polys[i] = red
                changed = True
            i += 1
        if not changed:
            break
    rules = dict(orient(p) for p in polys)
    return dict(sorted(rules.items(), key=lambda kv: word_key(kv[0])))


def build_presentation(family: Family | str, n: int | None = None) -> Presentation:
    """Oriented rule set for one of the four ball/boundary families.

    ``build_presentation("ball-even", 2)`` and
    ``build_presentation(Family("ball-even", 2))`` are equivalent.
    """
    if not isinstance(family, Family):
        if n is None:
            raise InvalidParameter("n is required when the family is given by name")
        family = Family(family, n)
    if family.n < 1:
        raise InvalidParameter(f"presentations need n >= 1, got {family.n}")
    letter, n = family.letter, family.n
    if family.even:
        relations = _even_relations(letter, n, family.boundary)
    else:
        relations = _odd_relations(letter, n, family.boundary)

    polys = []
    for r in relations:
        polys.append(r.poly)
        polys.append(r.poly.adjoint())
    rule_map = autoreduce(polys)
    rules = tuple(RewriteRule(lhs, rhs) for lhs, rhs in rule_map.items())
    for rule in rules:
        if len(rule.lhs) > 2:
            raise AssertionError(f"rule {rule} has a left side longer than 2")
        for w, _ in rule.rhs.items():
            if word_key(w) >= word_key(rule.lhs):
                raise AssertionError(f"rule {rule} does not decrease the termination order")
    return Presentation(family, tuple(family.labels), tuple(relations), rules)


def termination_rank(word: Word) -> tuple:
    """Degree first, then lexicographic in the letter order z1 < .. < zn < z1' < .. < zn'."""
    return word_key(word)


__all__ = [
    "Family",
    "Relation",
    "RewriteRule",
    "Presentation",
    "build_presentation",
    "termination_rank",
    "autoreduce",
    "Scalar",
]
