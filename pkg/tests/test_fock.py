import itertools
import math

import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp

from ncball import fock
from ncball.errors import InvalidParameter, NotInvertible, NotPositive
from ncball.fock import (
    TruncatedSpace,
    adjoint,
    check_q,
    compress,
    evaluate,
    interior_indices,
    interior_projector,
    max_entry_diff,
    min_eigenvalue,
    op_norm,
    polar_isometry,
    psd_sqrt,
    q_diagonal,
    residual,
    weighted_shift,
)
from ncball.ncalg import parse_expression


def test_space_indexing_roundtrip():
    space = TruncatedSpace((2, 3, 4))
    assert space.dim == 24
    assert space.strides == (12, 4, 1)
    for i, ks in enumerate(space.basis()):
        assert space.index(ks) == i
        assert space.multi_index(i) == ks
    with pytest.raises(InvalidParameter):
        space.index((2, 0, 0))
    with pytest.raises(InvalidParameter):
        space.multi_index(24)
    assert TruncatedSpace(()).dim == 1
    with pytest.raises(InvalidParameter):
        TruncatedSpace((0,))


def test_extend_appends_last_index():
    space = TruncatedSpace.cube(2, 3)
    big = space.extend(5)
    assert big.cutoffs == (3, 3, 5)
    q = 0.5
    # old shifts pick up the weight q^{k/2} of the new index; the new shift is a one-index shift
    dq = sp.diags(q ** (np.arange(5) / 2))
    for r in (1, 2):
        assert max_entry_diff(sp.kron(weighted_shift(r, space, q), dq), weighted_shift(r, big, q)) < 1e-15
    last = sp.kron(sp.identity(9), weighted_shift(1, TruncatedSpace((5,)), q))
    assert max_entry_diff(last, weighted_shift(3, big, q)) < 1e-15


def _shift_by_hand(r, cutoffs, q):
    space = TruncatedSpace(cutoffs)
    M = np.zeros((space.dim, space.dim), dtype=complex)
    for ks in space.basis():
        if ks[r - 1] + 1 >= cutoffs[r - 1]:
            continue
        tail = sum(ks[r:])
        w = math.sqrt((1 - q ** (ks[r - 1] + 1)) * q**tail)
        up = list(ks)
        up[r - 1] += 1
        M[space.index(up), space.index(ks)] = w
    return M


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("q", [0.3, 0.8])
def test_weighted_shift_matches_definition(r, q):
    cutoffs = (3, 4, 2)
    S = weighted_shift(r, TruncatedSpace(cutoffs), q)
    np.testing.assert_allclose(S.toarray(), _shift_by_hand(r, cutoffs, q), atol=1e-15)
    assert sp.tril(S, k=-1).nnz == S.nnz  # strictly lower triangular


def test_weighted_shift_validation():
    with pytest.raises(InvalidParameter):
        weighted_shift(3, TruncatedSpace.cube(2, 3), 0.5)
    with pytest.raises(InvalidParameter):
        weighted_shift(1, TruncatedSpace.cube(2, 3), 1.0)
    for bad in (0.0, 1.0, -0.2, 3):
        with pytest.raises(InvalidParameter):
            check_q(bad)


def test_q_diagonal():
    space = TruncatedSpace((2, 3))
    D = q_diagonal(space, 0.25, which=[2], offset=1.0)
    expected = [0.25 ** ((1 + k2) / 2) for k1, k2 in space.basis()]
    np.testing.assert_allclose(D.diagonal().real, expected)
    with pytest.raises(InvalidParameter):
        q_diagonal(space, 0.5, which=[3])


def test_interior():
    space = TruncatedSpace((5, 4))
    idx = interior_indices(space, 2)
    assert len(idx) == 3 * 2
    assert all(space.multi_index(i)[0] <= 2 and space.multi_index(i)[1] <= 1 for i in idx)
    P = interior_projector(space, 2)
    assert max_entry_diff(P @ P, P) == 0.0
    assert max_entry_diff(P, adjoint(P)) == 0.0
    with pytest.raises(InvalidParameter):
        interior_indices(space, -1)


def test_op_norm_against_dense_svd():
    rng = np.random.default_rng(3)
    for density in (0.05, 0.3):
        A = sp.random(60, 60, density=density, random_state=rng, format="csr") * (1 + 1j)
        assert op_norm(A) == pytest.approx(np.linalg.norm(A.toarray(), 2), rel=1e-12)
    perm = sp.csr_matrix((np.array([2.0, -3.0, 0.5j]), ([1, 2, 0], [0, 1, 2])), shape=(3, 3))
    assert op_norm(perm) == pytest.approx(3.0)
    assert op_norm(sp.csr_matrix((4, 4))) == 0.0


def test_op_norm_does_not_mutate_input():
    A = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, 2.0]]))
    A.data[0] = 0.0
    before = A.nnz
    op_norm(A)
    assert A.nnz == before


def test_power_iteration_path(monkeypatch):
    rng = np.random.default_rng(5)
    A = sp.random(150, 150, density=0.1, random_state=rng, format="csr")
    exact = np.linalg.norm(A.toarray(), 2)
    monkeypatch.setattr(fock, "DENSE_LIMIT", 10)
    assert op_norm(A) == pytest.approx(exact, rel=1e-6)


def test_polar_isometry():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((7, 4)) + 1j * rng.standard_normal((7, 4))
    T = polar_isometry(A).toarray()
    np.testing.assert_allclose(T.conj().T @ T, np.eye(4), atol=1e-12)
    oracle = A @ np.linalg.inv(sla.sqrtm(A.conj().T @ A))
    np.testing.assert_allclose(T, oracle, atol=1e-10)
    with pytest.raises(NotInvertible):
        polar_isometry(np.zeros((3, 3)))


def test_psd_sqrt():
    rng = np.random.default_rng(2)
    B = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    A = B @ B.conj().T
    R = psd_sqrt(A).toarray()
    np.testing.assert_allclose(R @ R, A, atol=1e-10)
    np.testing.assert_allclose(R, sla.sqrtm(A), atol=1e-10)
    np.testing.assert_allclose(psd_sqrt(sp.diags([4.0, 0.0, 1e-17])).diagonal(), [2.0, 0.0, 0.0])
    with pytest.raises(NotPositive):
        psd_sqrt(sp.diags([1.0, -1.0]))
    with pytest.raises(NotPositive):
        psd_sqrt(-A)


def test_min_eigenvalue_and_compress():
    A = sp.diags([3.0, -1.0, 2.0])
    assert min_eigenvalue(A) == pytest.approx(-1.0)
    assert min_eigenvalue(A, np.array([0, 2])) == pytest.approx(2.0)
    assert compress(A, np.array([2])).toarray()[0, 0] == 2.0


def test_evaluate_matches_matrix_arithmetic():
    space = TruncatedSpace.cube(2, 4)
    q = 0.4
    z1, z2 = weighted_shift(1, space, q), weighted_shift(2, space, q)
    expr = parse_expression("z1*z2' - s*z2'*z1 + 3/2*q")
    got = evaluate(expr, {"z1": z1, "z2": z2}, q)
    want = z1 @ adjoint(z2) - math.sqrt(q) * adjoint(z2) @ z1 + 1.5 * q * sp.identity(16)
    assert max_entry_diff(got, want) < 1e-14
    with pytest.raises(InvalidParameter):
        evaluate(expr, {"z1": z1}, q)
    with pytest.raises(InvalidParameter):
        evaluate(expr, {"z1": z1, "z2": sp.identity(3)}, q)


def test_shift_relations_hold_on_the_interior_only():
    # the defining commutation relation of the top index fails at the cutoff and holds inside
    space = TruncatedSpace.cube(1, 6)
    q = 0.5
    expr = parse_expression("z1'*z1 - q*z1*z1' - (1 - q)")
    mats = {"z1": weighted_shift(1, space, q)}
    assert residual(expr, mats, q, space, 1) < 1e-14
    assert residual(expr, mats, q, space, 0) > 0.1


@pytest.mark.parametrize("m,N", [(1, 5), (2, 4), (3, 3)])
def test_sum_of_shifts_is_bounded_by_one(m, N):
    space = TruncatedSpace.cube(m, N)
    q = 0.6
    total = sum((weighted_shift(r, space, q) @ adjoint(weighted_shift(r, space, q)) for r in range(1, m + 1)), sp.csr_matrix((space.dim, space.dim)))
    eig = np.linalg.eigvalsh(total.toarray())
    assert eig.max() <= 1 + 1e-12
    for ks in itertools.islice(space.basis(), 5):
        assert ks == space.multi_index(space.index(ks))
