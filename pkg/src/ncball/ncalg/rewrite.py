"""Oriented rewriting modulo a finite rule set with left sides of length <= 2."""

from __future__ import annotations

import random
from typing import Mapping

from ..errors import ReductionBudgetExceeded
from .poly import Polynomial, Word, word_key, word_str
from .scalar import Scalar

DEFAULT_BUDGET = 2_000_000


class Reducer:
    """Exhaustive rewriting of polynomials to their irreducible form.

    ``strategy="leftmost"`` contracts the leftmost-innermost redex (a length-1
    left side wins over a length-2 one starting at the same position).
    ``strategy="random"`` picks a redex uniformly at random from an RNG seeded
    with ``seed``; the fuzz suite uses it as an independent reduction path.

    Word results are memoised, so one Reducer should be reused across calls.
    """

    def __init__(
        self,
        rules: Mapping[Word, Polynomial],
        strategy: str = "leftmost",
        seed: int | None = None,
        budget: int = DEFAULT_BUDGET,
    ):
        if strategy not in ("leftmost", "random"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.rules1 = {lhs: rhs for lhs, rhs in rules.items() if len(lhs) == 1}
        self.rules2 = {lhs: rhs for lhs, rhs in rules.items() if len(lhs) == 2}
        if len(self.rules1) + len(self.rules2) != len(rules):
            raise ValueError("rule left sides must have length 1 or 2")
        self.strategy = strategy
        self.rng = random.Random(seed)
        self.budget = budget
        self._memo: dict[Word, dict[Word, Scalar]] = {}
        self._steps = 0

    def redexes(self, word: Word) -> list[tuple[int, int]]:
        found = []
        for i in range(len(word)):
            if word[i : i + 1] in self.rules1:
                found.append((i, 1))
            if i + 1 < len(word) and word[i : i + 2] in self.rules2:
                found.append((i, 2))
        return found

    def _first_redex(self, word: Word) -> tuple[int, int] | None:
        r1, r2 = self.rules1, self.rules2
        for i in range(len(word)):
            if word[i : i + 1] in r1:
                return (i, 1)
            if word[i : i + 2] in r2 and i + 1 < len(word):
                return (i, 2)
        return None

    def is_normal(self, word: Word) -> bool:
        return self._first_redex(word) is None

    def _reduce_word(self, word: Word) -> dict[Word, Scalar]:
        memo = self._memo.get(word)
        if memo is not None:
            return memo
        if self.strategy == "leftmost":
            redex = self._first_redex(word)
        else:
            options = self.redexes(word)
            redex = self.rng.choice(options) if options else None
        if redex is None:
            result = {word: Scalar.const(1)}
        else:
            self._steps += 1
            if self._steps > self.budget:
                raise ReductionBudgetExceeded(word_str(word), self.budget)
            pos, length = redex
            lhs = word[pos : pos + length]
            rhs = (self.rules1 if length == 1 else self.rules2)[lhs]
            prefix, suffix = word[:pos], word[pos + length :]
            result = {}
            for w, c in rhs.items():
                for w2, c2 in self._reduce_word(prefix + w + suffix).items():
                    v = c * c2
                    prev = result.get(w2)
                    result[w2] = v if prev is None else prev + v
            result = {w: c for w, c in result.items() if c}
        self._memo[word] = result
        return result

    def reduce(self, p: Polynomial) -> Polynomial:
        self._steps = 0
        acc: dict[Word, Scalar] = {}
        for w, c in p.items():
            for w2, c2 in self._reduce_word(w).items():
                v = c * c2
                prev = acc.get(w2)
                acc[w2] = v if prev is None else prev + v
        return Polynomial(acc)


def orient(p: Polynomial) -> tuple[Word, Polynomial]:
    """Split ``p = c*lhs + rest`` at its deglex-leading word and return ``lhs -> -rest/c``."""
    lhs = max((w for w, _ in p.items()), key=word_key)
    c = p.coefficient(lhs)
    if not c.is_monomial():
        raise ValueError(f"leading coefficient {c} of {p} is not invertible")
    rest = p - Polynomial.word(lhs, c)
    return lhs, (-rest).scale(Scalar.const(1) / c)
