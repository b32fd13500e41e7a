"""Joinability diagnostics for a rule set: randomized two-strategy fuzzing and an
exhaustive scan of overlap words. Neither adds rules; divergences are reported."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .poly import Generator, Polynomial, Word, word_str
from .presentation import Presentation
from .rewrite import Reducer
from .scalar import Scalar


def random_polynomial(rng: random.Random, pres: Presentation, max_degree: int = 6, max_terms: int = 3) -> Polynomial:
    """A few random words in the generators and their adjoints with random Laurent coefficients."""
    p = Polynomial()
    for _ in range(rng.randint(1, max_terms)):
        length = rng.randint(0, max_degree)
        word = tuple(Generator(pres.letter, rng.randint(1, pres.n), rng.random() < 0.5) for _ in range(length))
        coeff = Scalar.s_power(rng.randint(-2, 2), rng.choice((-3, -2, -1, 1, 2, 3)))
        p = p + Polynomial.word(word, coeff)
    return p


@dataclass(frozen=True)
class FuzzResult:
    family: str
    samples: int
    divergences: int
    witness: tuple[str, str, str] | None  # input, leftmost result, random result

    @property
    def ok(self) -> bool:
        return self.divergences == 0


def confluence_fuzz(pres: Presentation, samples: int = 10_000, max_degree: int = 6, seed: int = 0) -> FuzzResult:
    """Reduce random polynomials leftmost-innermost and by seeded random redex choice; count disagreements."""
    rng = random.Random(seed)
    leftmost = Reducer(pres.rule_map())
    other = Reducer(pres.rule_map(), strategy="random", seed=seed + 1)
    bad, witness = 0, None
    for _ in range(samples):
        p = random_polynomial(rng, pres, max_degree)
        a, b = leftmost.reduce(p), other.reduce(p)
        if a != b:
            bad += 1
            if witness is None:
                witness = (str(p), str(a), str(b))
    return FuzzResult(str(pres.family), samples, bad, witness)


@dataclass(frozen=True)
class Ambiguity:
    word: str
    left: str
    right: str


def _one_step(rules: dict[Word, Polynomial], word: Word, pos: int, length: int) -> Polynomial:
    rhs = rules[word[pos : pos + length]]
    prefix, suffix = Polynomial.word(word[:pos]), Polynomial.word(word[pos + length :])
    return prefix * rhs * suffix


def overlap_ambiguities(pres: Presentation) -> list[Ambiguity]:
    """Every overlap word abc of left sides ab, bc whose two one-step rewrites have different normal forms.

    Left sides have length <= 2 and are mutually irreducible, so these are all
    the critical pairs; an empty list means the rule set is locally confluent.
    """
    rules = pres.rule_map()
    red = pres.reducer
    pairs = [w for w in rules if len(w) == 2]
    out = []
    for ab in pairs:
        for bc in pairs:
            if ab[1] != bc[0]:
                continue
            word = (ab[0], ab[1], bc[1])
            left = red.reduce(_one_step(rules, word, 0, 2))
            right = red.reduce(_one_step(rules, word, 1, 2))
            if left != right:
                out.append(Ambiguity(word_str(word), str(left), str(right)))
    return out
