"""Symbolic checks: reduction to zero of relations, derived identities and phase automorphisms."""

from __future__ import annotations

from numbers import Complex

from ..errors import IdentityFailed, InvalidParameter
from ..report import VerificationReport
from .poly import Generator, Polynomial
from .presentation import Presentation, Relation
from .scalar import ONE, Q


def normal_form(p: Polynomial, pres: Presentation) -> Polynomial:
    """Irreducible form of ``p`` modulo the oriented rules of ``pres``.

    Linear in ``p``; raises ReductionBudgetExceeded if rewriting runs away.
    """
    foreign = {f"{letter}{i}" for letter, i in p.generators() if not pres.owns(Generator(letter, i))}
    if foreign:
        raise InvalidParameter(f"generators {sorted(foreign)} do not belong to {pres.family}")
    return pres.reducer.reduce(p)


def derived_identities(pres: Presentation) -> list[Relation]:
    """Consequences of the sphere relation that hold in the boundary algebras."""
    n, g = pres.n, pres.gen
    out: list[Relation] = []
    if pres.family.kind == "boundary-even":
        w = pres.letter
        out.append(Relation(f"{w}1 normal", g(1, True) * g(1) - g(1) * g(1, True)))
        for i in range(2, n + 1):
            tail = Polynomial()
            for j in range(1, i):
                tail = tail + g(j) * g(j, True)
            out.append(
                Relation(
                    f"{w}{i}'{w}{i} - {w}{i}{w}{i}' = (1 - q) sum_j<{i}",
                    g(i, True) * g(i) - g(i) * g(i, True) - (ONE - Q) * tail,
                )
            )
    elif pres.family.kind == "boundary-odd":
        t = pres.letter
        for i in range(2, n + 1):
            tail = g(1) * g(1)
            for j in range(2, i):
                tail = tail + g(j) * g(j, True)
            out.append(
                Relation(
                    f"{t}{i}'{t}{i} - {t}{i}{t}{i}' = (1 - q)({t}1^2 + sum_2<=j<{i})",
                    g(i, True) * g(i) - g(i) * g(i, True) - (ONE - Q) * tail,
                )
            )
    return out


def verify_identities_symbolic(pres: Presentation, strict: bool = False) -> VerificationReport:
    """Reduce every relation of ``pres`` and every applicable derived identity to normal form.

    With ``strict=True`` the first nonzero residue raises IdentityFailed.
    """
    report = VerificationReport(f"symbolic identities for {pres.family}")
    for kind, rels in (("relation", pres.relations), ("derived", derived_identities(pres))):
        for rel in rels:
            residue = normal_form(rel.poly, pres)
            if strict and residue:
                raise IdentityFailed(rel.name, residue)
            report.add(f"{kind}: {rel.name}", not residue, str(residue), "exact")
    return report


def _validate_phase(lam, what: str) -> complex:
    if not isinstance(lam, Complex):
        raise InvalidParameter(f"{what} must be a complex number, got {lam!r}")
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise InvalidParameter(f"{what} = {lam} is not of modulus one")
    return lam


def check_phase_automorphism(
    pres: Presentation, phases, conjugate_first: bool = False
) -> bool:
    """Does g_i -> lambda_i g_i (optionally g_1 -> lambda_1 g_1*) preserve the relations?

    Every phase is handled as a formal unimodular symbol, so a relation's image
    splits into components graded by the exponent vector of the lambdas; the
    image vanishes iff every component reduces to zero. For the odd families
    the phase of the self-adjoint generator must be +1 or -1 and is applied as
    an exact sign.
    """
    n = pres.n
    phases = list(phases)
    if len(phases) != n:
        raise InvalidParameter(f"expected {n} phases, got {len(phases)}")
    for i, lam in enumerate(phases, start=1):
        _validate_phase(lam, f"phase {i}")
    sign = 1
    if not pres.family.even:
        lam1 = complex(phases[0])
        if abs(lam1.imag) > 1e-12 or abs(abs(lam1.real) - 1) > 1e-12:
            raise InvalidParameter("the self-adjoint generator only admits the phases +1 and -1")
        sign = 1 if lam1.real > 0 else -1
        if conjugate_first:
            raise InvalidParameter("conjugating substitution is only defined for the even families")

    def image(g: Generator) -> tuple[int, tuple[int, ...], Generator]:
        charge = [0] * n
        if not pres.family.even and g.index == 1:
            return sign, tuple(charge), g
        charge[g.index - 1] = -1 if g.starred else 1
        if conjugate_first and g.index == 1:
            return 1, tuple(charge), g.adjoint()
        return 1, tuple(charge), g

    for rel in pres.relations:
        graded: dict[tuple[int, ...], Polynomial] = {}
        for word, c in rel.poly.items():
            total = [0] * n
            new_word = []
            factor = 1
            for g in word:
                sgn, ch, g2 = image(g)
                factor *= sgn
                total = [a + b for a, b in zip(total, ch)]
                new_word.append(g2)
            key = tuple(total)
            graded[key] = graded.get(key, Polynomial()) + Polynomial.word(tuple(new_word), c).scale(factor)
        for component in graded.values():
            if normal_form(component, pres):
                return False
    return True
