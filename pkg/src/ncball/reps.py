"""Irreducible representations of the balls, their boundary descents, the
quantum double suspension on matrices, and the numeric checks built on them."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import InvalidParameter
from .fock import (
    TruncatedSpace,
    adjoint,
    check_q,
    compress,
    evaluate,
    identity,
    interior_indices,
    max_entry_diff,
    min_eigenvalue,
    op_norm,
    polar_isometry,
    q_diagonal,
    residual_on,
    weighted_shift,
    zero,
)
from .ncalg import Family, Polynomial, Presentation, build_presentation
from .ncalg.scalar import ONE, Q
from .parallel import pmap
from .report import VerificationReport

THETA_GRID = tuple(cmath.exp(2j * math.pi * k / 8) for k in range(8))
S_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0)
DEFAULT_TOL = 1e-10

_KINDS = {
    "ball-even": ("rho", "sigma"),
    "ball-odd": ("eta", "sigma_s"),
    "boundary-even": ("rho",),
    "boundary-odd": ("eta", "sigma_s"),
}


def fmt_complex(z: complex) -> str:
    z = complex(z)
    re = 0.0 if abs(z.real) < 5e-7 else z.real
    im = 0.0 if abs(z.imag) < 5e-7 else z.imag
    return f"{re:.6g}{im:+.6g}i"


def _as_family(family: Family | str, n: int | None = None) -> Family:
    return family if isinstance(family, Family) else Family(family, n)


@dataclass(frozen=True)
class RepSpec:
    """Which representation to build: catalog kind plus its parameters."""

    family: Family
    kind: str
    q: float
    cutoff: int
    j: int | None = None
    theta: complex | None = None
    s_param: float | None = None
    parent: "RepSpec | None" = field(default=None, compare=False)

    def __post_init__(self):
        check_q(self.q)
        if self.cutoff < 1:
            raise InvalidParameter(f"cutoff must be >= 1, got {self.cutoff}")
        if self.theta is not None and abs(abs(self.theta) - 1.0) > 1e-12:
            raise InvalidParameter(f"theta = {self.theta} is not of modulus one")
        if self.s_param is not None and not -1.0 <= self.s_param <= 1.0:
            raise InvalidParameter(f"s_param = {self.s_param} lies outside [-1, 1]")

    @property
    def label(self) -> str:
        if self.kind in ("rho", "eta"):
            return f"{self.kind}_{self.j}(theta={fmt_complex(self.theta)})"
        if self.kind == "sigma_s":
            return f"sigma_s(s={self.s_param:g})"
        if self.kind == "suspension" and self.parent is not None:
            return f"susp[{self.parent.label}]"
        return self.kind


@dataclass(frozen=True)
class Representation:
    """Generator label -> matrix on a direct sum of truncated spaces (usually one)."""

    spec: RepSpec
    matrices: dict
    blocks: tuple[TruncatedSpace, ...]
    name: str | None = None

    @property
    def family(self) -> Family:
        return self.spec.family

    @property
    def q(self) -> float:
        return self.spec.q

    @property
    def label(self) -> str:
        return self.name or self.spec.label

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.family.labels)

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    @property
    def space(self) -> TruncatedSpace:
        if len(self.blocks) != 1:
            raise InvalidParameter(f"{self.label} is a direct sum of {len(self.blocks)} spaces")
        return self.blocks[0]

    def __getitem__(self, label: str) -> sp.csr_matrix:
        return self.matrices[label]

    def gen(self, i: int) -> sp.csr_matrix:
        return self.matrices[f"{self.family.letter}{i}"]

    def interior(self, margin: int) -> np.ndarray:
        parts, offset = [], 0
        for b in self.blocks:
            parts.append(interior_indices(b, margin) + offset)
            offset += b.dim
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def evaluate(self, expr: Polynomial) -> sp.csr_matrix:
        return evaluate(expr, self.matrices, self.q, self.dim)

    def relabel(self, family: Family) -> "Representation":
        """Same matrices, read as generators of ``family`` (same n, letters swapped)."""
        if family.n != self.family.n:
            raise InvalidParameter(f"cannot relabel {self.family} as {family}")
        mats = {f"{family.letter}{i}": self.gen(i) for i in range(1, family.n + 1)}
        return Representation(replace(self.spec, family=family), mats, self.blocks, self.name)


def _shifts(space: TruncatedSpace, q: float) -> list[sp.csr_matrix]:
    return [weighted_shift(r, space, q) for r in range(1, space.m + 1)]


def irrep_ball_even(spec: RepSpec) -> Representation:
    """rho_j^theta on H_{j-1} (j = 1..n) or sigma on H_n for the even ball."""
    fam = spec.family
    if fam.kind != "ball-even" or spec.kind not in _KINDS["ball-even"]:
        raise InvalidParameter(f"{spec.kind!r} is not a catalog kind of {fam}")
    n, q = fam.n, spec.q
    if spec.kind == "sigma":
        space = TruncatedSpace.cube(n, spec.cutoff)
        mats = {f"z{i}": S for i, S in enumerate(_shifts(space, q), start=1)}
        return Representation(spec, mats, (space,))
    j = spec.j
    if j is None or not 1 <= j <= n or spec.theta is None:
        raise InvalidParameter(f"rho needs 1 <= j <= {n} and a phase theta, got j={j}")
    space = TruncatedSpace.cube(j - 1, spec.cutoff)
    shifts = _shifts(space, q)
    mats = {}
    for i in range(1, n + 1):
        if i <= n - j:
            mats[f"z{i}"] = zero(space)
        elif i == n - j + 1:
            mats[f"z{i}"] = spec.theta * q_diagonal(space, q, range(1, space.m + 1))
        else:
            mats[f"z{i}"] = shifts[i + j - n - 2]
    return Representation(spec, mats, (space,))


def irrep_ball_odd(spec: RepSpec) -> Representation:
    """eta_j^theta on H_{j-1} or sigma_s on H_{m-1} for the odd ball with m generators."""
    fam = spec.family
    if fam.kind != "ball-odd" or spec.kind not in _KINDS["ball-odd"]:
        raise InvalidParameter(f"{spec.kind!r} is not a catalog kind of {fam}")
    n, q = fam.n - 1, spec.q
    if spec.kind == "sigma_s":
        if spec.s_param is None:
            raise InvalidParameter("sigma_s needs s_param in [-1, 1]")
        space = TruncatedSpace.cube(n, spec.cutoff)
        mats = {"x1": spec.s_param * q_diagonal(space, q, range(1, n + 1))}
        for i, S in enumerate(_shifts(space, q), start=2):
            mats[f"x{i}"] = S
        return Representation(spec, mats, (space,))
    j = spec.j
    if j is None or not 1 <= j <= n or spec.theta is None:
        raise InvalidParameter(f"eta needs 1 <= j <= {n} and a phase theta, got j={j}")
    space = TruncatedSpace.cube(j - 1, spec.cutoff)
    shifts = _shifts(space, q)
    mats = {}
    for i in range(1, n + 2):
        if i <= n - j + 1:
            mats[f"x{i}"] = zero(space)
        elif i == n - j + 2:
            mats[f"x{i}"] = spec.theta * q_diagonal(space, q, range(1, space.m + 1))
        else:
            mats[f"x{i}"] = shifts[i + j - n - 3]
    return Representation(spec, mats, (space,))


def build_rep(spec: RepSpec) -> Representation:
    fam = spec.family
    if fam.boundary:
        rep = build_rep(replace(spec, family=fam.ball()))
        if spec.kind == "sigma_s" and abs(spec.s_param) != 1.0:
            raise InvalidParameter("only sigma_{+1} and sigma_{-1} descend to the boundary")
        if spec.kind not in _KINDS[fam.kind]:
            raise InvalidParameter(f"{spec.kind!r} does not descend to {fam}")
        return rep.relabel(fam)
    if fam.even:
        return irrep_ball_even(spec)
    return irrep_ball_odd(spec)


def catalog_specs(
    family: Family, q: float, cutoff: int, thetas: Sequence[complex] = THETA_GRID, s_grid: Sequence[float] = S_GRID
) -> list[RepSpec]:
    """Every catalog member of ``family`` over the phase and interval grids."""
    n = family.n
    circles = n if family.even else n - 1
    circle_kind = "rho" if family.even else "eta"
    specs = [
        RepSpec(family, circle_kind, q, cutoff, j=j, theta=complex(t))
        for j in range(1, circles + 1)
        for t in thetas
    ]
    if family.kind == "ball-even":
        specs.append(RepSpec(family, "sigma", q, cutoff))
    elif family.kind == "ball-odd":
        specs += [RepSpec(family, "sigma_s", q, cutoff, s_param=float(s)) for s in s_grid]
    elif family.kind == "boundary-odd":
        specs += [RepSpec(family, "sigma_s", q, cutoff, s_param=s) for s in (1.0, -1.0)]
    return specs


def catalog(family: Family | str, n: int | None = None, q: float = 0.5, cutoff: int = 8, **grids) -> list[Representation]:
    return [build_rep(s) for s in catalog_specs(_as_family(family, n), q, cutoff, **grids)]


def catalog_shape(family: Family | str, n: int | None = None) -> dict[str, int]:
    """Number of circle-parametrized families and of point/interval families."""
    family = _as_family(family, n)
    specs = catalog_specs(family, 0.5, 2, thetas=(1.0,), s_grid=(0.0,))
    circles = len({s.j for s in specs if s.kind in ("rho", "eta")})
    return {"circle_families": circles, "point_families": int(family.kind == "ball-even"),
            "interval_families": int(family.kind == "ball-odd")}


def boundary_descents(
    family: Family | str, n: int | None = None, q: float = 0.5, cutoff: int = 8, **grids
) -> list[Representation]:
    """Catalog members killing the boundary ideal, written in boundary generators."""
    family = _as_family(family, n)
    if not family.boundary:
        raise InvalidParameter(f"{family} is not a boundary family")
    return catalog(family, q=q, cutoff=cutoff, **grids)


def direct_sum(reps: Sequence[Representation], name: str | None = None) -> Representation:
    if not reps:
        raise InvalidParameter("direct sum of no representations")
    fam, q = reps[0].family, reps[0].q
    if any(r.family != fam or r.q != q for r in reps):
        raise InvalidParameter("direct summands must share family and q")
    mats = {lab: sp.block_diag([r[lab] for r in reps], format="csr").astype(complex) for lab in reps[0].labels}
    blocks = tuple(b for r in reps for b in r.blocks)
    spec = RepSpec(fam, "sum", q, max(r.spec.cutoff for r in reps))
    return Representation(spec, mats, blocks, name or " + ".join(r.label for r in reps))


def point_rep(q: float) -> Representation:
    """The character of C: no generators on a 1-dimensional space."""
    return Representation(RepSpec(Family("ball-even", 0), "point", q, 1), {}, (TruncatedSpace(()),))


def level_shift(K: int, q: float, overflow: bool = False) -> sp.csr_matrix:
    """W xi_k = sqrt(1 - q^{k+1}) xi_{k+1} on K levels; with ``overflow`` the target has K+1 levels."""
    k = np.arange(K)
    keep = k if overflow else k[:-1]
    w = np.sqrt(1.0 - q ** (keep + 1.0)).astype(complex)
    rows = K + 1 if overflow else K
    return sp.csr_matrix((w, (keep + 1, keep)), shape=(rows, K))


def suspend_rep(rep: Representation, K: int) -> Representation:
    """Generators g_j (x) diag(q^{k/2}) and 1 (x) W on H (x) (K levels)."""
    if K < 1:
        raise InvalidParameter(f"suspension cutoff must be >= 1, got {K}")
    q = rep.q
    fam = Family(rep.family.ball().kind, rep.family.n + 1)
    dq = sp.diags((q ** (np.arange(K) / 2.0)).astype(complex), format="csr")
    ident = sp.identity(rep.dim, dtype=complex, format="csr")
    mats = {f"{fam.letter}{i}": sp.kron(rep.gen(i), dq, format="csr") for i in range(1, rep.family.n + 1)}
    mats[f"{fam.letter}{fam.n}"] = sp.kron(ident, level_shift(K, q), format="csr")
    blocks = tuple(b.extend(K) for b in rep.blocks)
    spec = RepSpec(fam, "suspension", q, K, parent=rep.spec)
    return Representation(spec, mats, blocks, f"susp[{rep.label}]" if rep.name else None)


def relation_margin(poly: Polynomial) -> int:
    return max(1, poly.degree() - 1)


def positivity_checks(pres: Presentation) -> list[tuple[str, Polynomial]]:
    """Operators required to be positive in every representation of the ball families."""
    g, n, x = pres.gen, pres.n, pres.letter
    out = []
    if pres.family.kind == "ball-even":
        radius = Polynomial.const(1)
        for j in range(1, n + 1):
            radius = radius - g(j) * g(j, True)
        out.append((f"1 - sum {x}j{x}j' >= 0", radius))
        out.append((f"{x}1'{x}1 - {x}1{x}1' >= 0", g(1, True) * g(1) - g(1) * g(1, True)))
        out.append((f"{x}{n}'{x}{n} >= 1 - q", g(n, True) * g(n) - (ONE - Q)))
    elif pres.family.kind == "ball-odd":
        radius = Polynomial.const(1) - g(1) * g(1)
        for j in range(2, n + 1):
            radius = radius - g(j) * g(j, True)
        out.append((f"1 - {x}1^2 - sum_j>=2 {x}j{x}j' >= 0", radius))
    return out


def verify_rep(
    rep: Representation, pres: Presentation | None = None, margin: int | None = None, tol: float = DEFAULT_TOL
) -> VerificationReport:
    """Interior residual of every relation plus the family's positivity conditions."""
    pres = pres or build_presentation(rep.family)
    if tuple(pres.generators) != rep.labels:
        raise InvalidParameter(f"representation generators {rep.labels} do not match {pres.family}")
    report = VerificationReport(f"{rep.label} on {pres.family}")
    for rel in pres.relations:
        m = relation_margin(rel.poly) if margin is None else margin
        r = residual_on(rel.poly, rep.matrices, rep.q, rep.interior(m), rep.dim)
        report.add(f"relation: {rel.name}", r <= tol, r, f"interior residual, margin {m}")
    for name, poly in positivity_checks(pres):
        m = relation_margin(poly) if margin is None else margin
        lo = min_eigenvalue(rep.evaluate(poly), rep.interior(m))
        report.add(f"positivity: {name}", lo >= -tol, lo, f"smallest interior eigenvalue, margin {m}")
    return report


def verify_catalog(
    family: Family | str,
    n: int | None = None,
    q: float = 0.5,
    cutoff: int = 8,
    margin: int | None = 2,
    tol: float = DEFAULT_TOL,
    **grids,
) -> VerificationReport:
    """verify_rep over the whole catalog of ``family``; sweeps run on the shared thread pool."""
    family = _as_family(family, n)
    pres = build_presentation(family)
    reps = catalog(family, q=q, cutoff=cutoff, **grids)
    parts = pmap(lambda r: verify_rep(r, pres, margin, tol), reps)
    report = VerificationReport(f"catalog of {family} at q={q:g}, cutoff {cutoff}")
    for rep, part in zip(reps, parts):
        report.extend(part, prefix=f"{rep.label}: ")
    return report


def _commutator_residual(A, B, c: float, idx) -> float:
    """|| A B - c B A || on the interior block."""
    return op_norm(compress(A @ B - c * (B @ A), idx))


def check_suspension(rep: Representation, K: int, tol: float = 1e-12) -> VerificationReport:
    """Suspension identities and the radius identity for ``suspend_rep(rep, K)``."""
    sus = suspend_rep(rep, K)
    q, n = rep.q, rep.family.n
    s = math.sqrt(q)
    top = sus.gen(n + 1)
    top_h = adjoint(top)
    idx = sus.interior(1)
    report = VerificationReport(f"suspension of {rep.label}")
    for j in range(1, n + 1):
        G = sus.gen(j)
        r1 = _commutator_residual(G, top, s, idx)
        report.add(f"G{j} G{n + 1} = s G{n + 1} G{j}", r1 <= tol, r1)
        r2 = _commutator_residual(G, top_h, 1 / s, idx)
        report.add(f"G{j} G{n + 1}' = s^-1 G{n + 1}' G{j}", r2 <= tol, r2)
    ident = identity(TruncatedSpace((sus.dim,)))
    r3 = op_norm(compress(top_h @ top - q * (top @ top_h) - (1 - q) * ident, idx))
    report.add(f"G{n + 1}'G{n + 1} - q G{n + 1}G{n + 1}' = 1 - q", r3 <= tol, r3)
    lhs = ident.copy()
    for j in range(1, n + 2):
        G = sus.gen(j)
        lhs = lhs - G @ adjoint(G)
    base = identity(TruncatedSpace((rep.dim,)))
    for j in range(1, n + 1):
        base = base - rep.gen(j) @ adjoint(rep.gen(j))
    rhs = sp.kron(base, sp.diags(q ** np.arange(K, dtype=float)), format="csr")
    r4 = max_entry_diff(lhs, rhs, idx)
    report.add("radius: 1 - sum G G' = (1 - sum g g') (x) diag(q^k)", r4 <= tol, r4, "entrywise on the interior")
    return report


def suspension_matches_sigma(n: int, q: float, cutoff: int, tol: float = 1e-12) -> VerificationReport:
    """Suspending sigma of the n-ball reproduces sigma of the (n+1)-ball entrywise."""
    fam = Family("ball-even", n)
    sus = suspend_rep(build_rep(RepSpec(fam, "sigma", q, cutoff)), cutoff)
    target = build_rep(RepSpec(Family("ball-even", n + 1), "sigma", q, cutoff))
    report = VerificationReport(f"suspension of sigma, n={n} -> {n + 1}")
    for lab in target.labels:
        d = max_entry_diff(sus[lab], target[lab])
        report.add(f"{lab} entrywise", d <= tol, d)
    return report


def _isometric_part(base: Representation, L: int) -> sp.csr_matrix:
    """Polar isometry of 1 (x) W computed with one overflow level, then cut back to L levels."""
    A = sp.kron(sp.identity(base.dim, dtype=complex), level_shift(L, base.q, overflow=True), format="csr")
    T_ext = polar_isometry(A)
    keep = np.array([b * (L + 1) + k for b in range(base.dim) for k in range(L)])
    T = T_ext[keep].toarray()
    T[np.abs(T) < 1e-14] = 0.0
    return sp.csr_matrix(T)


def check_sum_identities(
    n: int,
    q: float = 0.5,
    cutoff: int = 6,
    terms: Iterable[int] = range(0, 13),
    levels: int | None = None,
    margin: int = 1,
    tol: float = DEFAULT_TOL,
) -> VerificationReport:
    """Truncated series for Z_i and Z_{n+1} in terms of the polar isometry T of Z_{n+1}.

    Each partial sum with K terms must be within its geometric tail bound of
    the generator on the interior, and the error must not grow with K.
    """
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    q = check_q(q)
    terms = sorted(set(terms))
    L = levels or (max(terms) + 3)
    base = build_rep(RepSpec(Family("ball-even", n), "sigma", q, cutoff))
    sus = suspend_rep(base, L)
    T = _isometric_part(base, L)
    Th = adjoint(T)
    ident = identity(TruncatedSpace((sus.dim,)))
    defect = ident - T @ Th
    idx = sus.interior(margin)
    report = VerificationReport(f"sum identities, n={n}, q={q:g}")
    s = math.sqrt(q)

    gens = [(i, sus.gen(i)) for i in range(1, n + 1)]
    for i, Z in gens:
        full = op_norm(Z)
        core = Z @ defect
        partial = sp.csr_matrix(Z.shape, dtype=complex)
        Tk, Tkh = ident, ident
        errors = []
        for K in range(0, max(terms) + 1):
            if K in terms:
                err = op_norm(compress(Z - partial, idx))
                errors.append(err)
                bound = s**K * full + tol
                report.add(f"Z{i} with {K} terms", err <= bound, err, f"bound {bound:.6g}")
                if K == 0:
                    exact = op_norm(compress(Z, idx))
                    report.add(f"Z{i} with 0 terms equals ||Z{i}||", abs(err - exact) <= 1e-12, err)
            partial = partial + s**K * (Tk @ core @ Tkh)
            Tk, Tkh = Tk @ T, Tkh @ Th
        mono = all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
        report.add(f"Z{i} error is nonincreasing in K", mono, errors[-1])

    Z = sus.gen(n + 1)
    partial = T.copy()
    Tk, Tkh = ident, ident
    errors = []
    for K in range(0, max(terms) + 1):
        if K in terms:
            err = op_norm(compress(Z - partial, idx))
            errors.append(err)
            bound = q ** (K + 1) / (1 - q) + tol
            report.add(f"Z{n + 1} with {K} terms", err <= bound, err, f"bound {bound:.6g}")
        partial = partial + (math.sqrt(1 - q ** (K + 1)) - 1) * (Tk @ T @ defect @ Tkh)
        Tk, Tkh = Tk @ T, Tkh @ Th
    mono = all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
    report.add(f"Z{n + 1} error is nonincreasing in K", mono, errors[-1])
    return report


def check_tccr(n: int, q: float, cutoff: int = 8, margin: int = 1, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Twisted CCR for a_i = z_i' / sqrt(1 - q) in sigma, with mu = sqrt(q)."""
    rep = build_rep(RepSpec(Family("ball-even", n), "sigma", q, cutoff))
    c = 1 / math.sqrt(1 - q)
    a = {i: c * adjoint(rep.gen(i)) for i in range(1, n + 1)}
    ah = {i: adjoint(a[i]) for i in a}
    mu = math.sqrt(q)
    idx = rep.interior(margin)
    ident = identity(TruncatedSpace((rep.dim,)))
    report = VerificationReport(f"TCCR for sigma, n={n}, q={q:g}")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            r = op_norm(compress(a[j] @ a[i] - mu * (a[i] @ a[j]), idx))
            report.add(f"a{j} a{i} = mu a{i} a{j}", r <= tol, r)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                r = op_norm(compress(a[j] @ ah[i] - mu * (ah[i] @ a[j]), idx))
                report.add(f"a{j} a{i}' = mu a{i}' a{j}", r <= tol, r)
    for i in range(1, n + 1):
        rhs = ident + mu**2 * (ah[i] @ a[i])
        for j in range(i + 1, n + 1):
            rhs = rhs - (1 - mu**2) * (ah[j] @ a[j])
        r = op_norm(compress(a[i] @ ah[i] - rhs, idx))
        report.add(f"a{i} a{i}' = 1 + mu^2 a{i}'a{i} - (1 - mu^2) sum_j>{i}", r <= tol, r)
    return report


@dataclass(frozen=True)
class InjectivityResult:
    criterion: str
    injective: bool
    witness: object
    note: str = ""


_CRITERIA = {"ball-even": "normality", "boundary-odd": "sign-spectrum", "boundary-even": "circle-cover"}


def injectivity_check(
    rep: Representation,
    criterion: str | None = None,
    tol: float = DEFAULT_TOL,
    delta: float = 0.2,
    margin: int = 1,
) -> InjectivityResult:
    """Finite-level witnesses for the faithfulness criteria of the ball and boundary algebras."""
    expected = _CRITERIA.get(rep.family.kind)
    criterion = criterion or expected
    if criterion is None or criterion != expected:
        raise InvalidParameter(f"criterion {criterion!r} does not apply to {rep.family}")
    idx = rep.interior(margin)
    g1 = rep.gen(1)
    if criterion == "normality":
        defect = op_norm(compress(adjoint(g1) @ g1 - g1 @ adjoint(g1), idx))
        return InjectivityResult(criterion, defect > tol, defect, "norm of the self-commutator of the first generator")
    if criterion == "sign-spectrum":
        block = compress(g1, idx).toarray()
        eig = np.linalg.eigvalsh((block + block.conj().T) / 2)
        lo, hi = float(eig[0]), float(eig[-1])
        return InjectivityResult(criterion, lo < -tol and hi > tol, (lo, hi), "extreme eigenvalues of the first generator")
    block = compress(g1, idx).toarray()
    eig = np.linalg.eigvals(block)
    unimodular = eig[np.abs(np.abs(eig) - 1.0) <= 1e-9]
    if unimodular.size == 0:
        gap = 2 * math.pi
    else:
        phases = np.sort(np.angle(unimodular) % (2 * math.pi))
        gap = float(np.max(np.diff(np.concatenate([phases, phases[:1] + 2 * math.pi]))))
    return InjectivityResult(
        criterion,
        gap <= 2 * delta,
        gap,
        f"largest gap between unimodular eigenvalue phases; truncation surrogate with delta={delta:g}",
    )
