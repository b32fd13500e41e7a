"""Truncated multi-index Fock spaces, weighted shifts and the numeric toolbox.

Operators are ``scipy.sparse.csr_matrix`` objects with complex128 entries.
Basis vectors are enumerated row-major: the first index is the most
significant, so ``H_n (x) l^2`` identifies with ``H_{n+1}`` by appending
the new index last.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .errors import InvalidParameter, NotInvertible, NotPositive
from .ncalg.poly import Polynomial

DENSE_LIMIT = 4096
POWER_RTOL = 1e-12


def check_q(q: float) -> float:
    q = float(q)
    if not 0.0 < q < 1.0:
        raise InvalidParameter(f"q must lie strictly between 0 and 1, got {q}")
    return q


@dataclass(frozen=True)
class TruncatedSpace:
    """Span of xi_{k_1..k_m} with 0 <= k_i < cutoffs[i-1]; m = 0 is the 1-dim point space."""

    cutoffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cutoffs", tuple(int(c) for c in self.cutoffs))
        if any(c < 1 for c in self.cutoffs):
            raise InvalidParameter(f"cutoffs must be positive, got {self.cutoffs}")

    @classmethod
    def cube(cls, m: int, N: int) -> "TruncatedSpace":
        if m < 0:
            raise InvalidParameter(f"number of indices must be >= 0, got {m}")
        return cls((N,) * m)

    @property
    def m(self) -> int:
        return len(self.cutoffs)

    @property
    def dim(self) -> int:
        return int(np.prod(self.cutoffs, dtype=np.int64)) if self.cutoffs else 1

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        acc = 1
        for c in reversed(self.cutoffs):
            out.append(acc)
            acc *= c
        return tuple(reversed(out))

    @cached_property
    def levels(self) -> np.ndarray:
        """Integer array of shape (dim, m); row i is the multi-index of basis vector i."""
        if not self.cutoffs:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.cutoffs).reshape(self.m, -1)
        return grids.T.copy()

    def index(self, ks: Iterable[int]) -> int:
        ks = tuple(ks)
        if len(ks) != self.m or any(not 0 <= k < c for k, c in zip(ks, self.cutoffs)):
            raise InvalidParameter(f"multi-index {ks} is outside {self.cutoffs}")
        return sum(k * s for k, s in zip(ks, self.strides))

    def multi_index(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.dim:
            raise InvalidParameter(f"basis index {i} is outside 0..{self.dim - 1}")
        return tuple(int(k) for k in self.levels[i])

    def basis(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(c) for c in self.cutoffs))

    def extend(self, K: int) -> "TruncatedSpace":
        """This space tensored with a K-level space, the new index last."""
        return TruncatedSpace(self.cutoffs + (K,))


def identity(space: TruncatedSpace) -> sp.csr_matrix:
    return sp.identity(space.dim, dtype=complex, format="csr")


def zero(space: TruncatedSpace) -> sp.csr_matrix:
    return sp.csr_matrix((space.dim, space.dim), dtype=complex)


def adjoint(A) -> sp.csr_matrix:
    return sp.csr_matrix(A).conj().T.tocsr()


def weighted_shift(r: int, space: TruncatedSpace, q: float) -> sp.csr_matrix:
    """S_r: raises k_r by one with weight sqrt((1 - q^{1+k_r}) q^{k_{r+1}+..+k_m}); the top level is annihilated."""
    q = check_q(q)
    if not 1 <= r <= space.m:
        raise InvalidParameter(f"shift index r={r} is outside 1..{space.m}")
    lev = space.levels
    kr = lev[:, r - 1]
    tail = lev[:, r:].sum(axis=1)
    src = np.nonzero(kr < space.cutoffs[r - 1] - 1)[0]
    weights = np.sqrt((1.0 - q ** (1.0 + kr[src])) * q ** tail[src].astype(float))
    dst = src + space.strides[r - 1]
    return sp.csr_matrix((weights.astype(complex), (dst, src)), shape=(space.dim, space.dim))


def q_diagonal(space: TruncatedSpace, q: float, which: Iterable[int] = (), offset: float = 0.0) -> sp.csr_matrix:
    """Diagonal q^{(offset + sum_{i in which} k_i)/2}; ``which`` holds 1-based indices."""
    q = check_q(q)
    which = sorted(set(which))
    if any(not 1 <= i <= space.m for i in which):
        raise InvalidParameter(f"indices {which} are outside 1..{space.m}")
    exps = space.levels[:, [i - 1 for i in which]].sum(axis=1).astype(float) if which else np.zeros(space.dim)
    return sp.diags((q ** ((exps + offset) / 2.0)).astype(complex), format="csr")


def interior_indices(space: TruncatedSpace, margin: int) -> np.ndarray:
    """Basis indices with every k_i <= N_i - 1 - margin."""
    if margin < 0:
        raise InvalidParameter(f"margin must be >= 0, got {margin}")
    bound = np.asarray(space.cutoffs, dtype=np.int64) - 1 - margin
    return np.nonzero(np.all(space.levels <= bound, axis=1))[0]


def interior_projector(space: TruncatedSpace, margin: int) -> sp.csr_matrix:
    mask = np.zeros(space.dim, dtype=complex)
    mask[interior_indices(space, margin)] = 1.0
    return sp.diags(mask, format="csr")


def compress(A, idx: np.ndarray):
    """The block of A on rows and columns ``idx``."""
    A = sp.csr_matrix(A)
    return A[idx][:, idx]


def op_norm(A) -> float:
    """Largest singular value; dense SVD up to DENSE_LIMIT, power iteration on A*A above."""
    A = sp.csr_matrix(A, copy=True)
    if A.shape[0] == 0 or A.shape[1] == 0 or A.nnz == 0:
        return 0.0
    A.eliminate_zeros()
    if _is_monomial(A):
        # at most one nonzero per row and per column: the norm is the largest entry
        return float(np.abs(A.data).max())
    if max(A.shape) <= DENSE_LIMIT:
        return float(np.linalg.norm(A.toarray(), 2))
    return _power_norm(A)


def _is_monomial(A: sp.csr_matrix) -> bool:
    if np.diff(A.indptr).max(initial=0) > 1:
        return False
    return np.bincount(A.indices, minlength=A.shape[1]).max(initial=0) <= 1


def _power_norm(A: sp.csr_matrix, max_iter: int = 10_000) -> float:
    AH = A.conj().T.tocsr()
    rng = np.random.default_rng(0)
    v = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(max_iter):
        w = AH @ (A @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(nw - est) <= POWER_RTOL * nw:
            est = nw
            break
        est = nw
    return float(np.sqrt(est))


def evaluate(expr: Polynomial, assignment: Mapping[str, object], q: float, dim: int | None = None) -> sp.csr_matrix:
    """Image of ``expr`` under the *-homomorphism fixed by generator label -> matrix."""
    mats = {k: sp.csr_matrix(v, dtype=complex) for k, v in assignment.items()}
    dims = {m.shape for m in mats.values()}
    if dim is None:
        if not dims:
            raise InvalidParameter("cannot infer the dimension of an empty assignment")
        dim = next(iter(dims))[0]
    if any(s != (dim, dim) for s in dims):
        raise InvalidParameter(f"assignment matrices have mismatched shapes {sorted(dims)}")
    adj = {}
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for word, c in expr.items():
        term = identity(TruncatedSpace((dim,)))
        for g in word:
            if g.label not in mats:
                raise InvalidParameter(f"generator {g.label} has no matrix")
            if g.starred:
                if g.label not in adj:
                    adj[g.label] = adjoint(mats[g.label])
                term = term @ adj[g.label]
            else:
                term = term @ mats[g.label]
        total = total + c.evaluate(q) * term
    return total.tocsr()


def residual(expr: Polynomial, assignment: Mapping[str, object], q: float, space: TruncatedSpace, margin: int) -> float:
    """Operator norm of P eval(expr) P with P the interior projector of the given margin."""
    return residual_on(expr, assignment, q, interior_indices(space, margin), space.dim)


def residual_on(expr: Polynomial, assignment: Mapping[str, object], q: float, idx: np.ndarray, dim: int) -> float:
    """Operator norm of eval(expr) compressed to the basis vectors ``idx``."""
    if not expr:
        return 0.0
    return op_norm(compress(evaluate(expr, assignment, q, dim), idx))


def polar_isometry(A, tol: float = 1e-8) -> sp.csr_matrix:
    """T = A (A*A)^{-1/2} for A with full column rank (rectangular allowed)."""
    dense = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=complex)
    gram = dense.conj().T @ dense
    w, V = np.linalg.eigh((gram + gram.conj().T) / 2)
    if w.size and w.min() < tol * tol:
        smallest = float(np.sqrt(max(w.min(), 0.0)))
        raise NotInvertible(f"smallest singular value {smallest:.3e} is below tol {tol:.1e}; raise the cutoff")
    inv_sqrt = (V / np.sqrt(w)) @ V.conj().T
    return sp.csr_matrix(dense @ inv_sqrt)


def psd_sqrt(A, floor: float = -1e-10, chop: float = 1e-13) -> sp.csr_matrix:
    """Positive square root of a self-adjoint matrix whose spectrum is >= ``floor``.

    Eigenvalues below ``chop`` count as exact zeros: the square root would
    otherwise turn round-off of size 1e-17 into entries of size 1e-8.
    """
    A = sp.csr_matrix(A, dtype=complex)
    diag = A.diagonal()
    if (A - sp.diags(diag)).count_nonzero() == 0:
        vals = diag.real
        if vals.size and vals.min() < floor:
            raise NotPositive(f"minimum eigenvalue {vals.min():.3e} is below {floor:.1e}")
        return sp.diags(np.sqrt(np.where(vals < chop, 0.0, vals)).astype(complex), format="csr")
    dense = A.toarray()
    w, V = np.linalg.eigh((dense + dense.conj().T) / 2)
    if w.min() < floor:
        raise NotPositive(f"minimum eigenvalue {w.min():.3e} is below {floor:.1e}")
    root = (V * np.sqrt(np.where(w < chop, 0.0, w))) @ V.conj().T
    root[np.abs(root) < 1e-15] = 0.0
    return sp.csr_matrix(root)


def min_eigenvalue(A, idx: np.ndarray | None = None) -> float:
    """Smallest eigenvalue of the Hermitian part of A, optionally compressed to ``idx``."""
    A = sp.csr_matrix(A)
    if idx is not None:
        A = compress(A, idx)
    if A.shape[0] == 0:
        return 0.0
    dense = A.toarray()
    return float(np.linalg.eigvalsh((dense + dense.conj().T) / 2)[0])


def max_entry_diff(A, B, idx: np.ndarray | None = None) -> float:
    """Largest entrywise absolute difference, optionally on the ``idx`` block."""
    D = sp.csr_matrix(A) - sp.csr_matrix(B)
    if idx is not None:
        D = compress(D, idx)
    return float(np.abs(D.data).max()) if D.nnz else 0.0
