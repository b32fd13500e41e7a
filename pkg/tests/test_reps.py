import cmath
import math
from dataclasses import replace

import numpy as np
import pytest
import scipy.sparse as sp

from ncball.errors import InvalidParameter
from ncball.fock import TruncatedSpace, adjoint, max_entry_diff, weighted_shift
from ncball.ncalg import Family, build_presentation
from ncball.reps import (
    RepSpec,
    Representation,
    boundary_descents,
    build_rep,
    catalog,
    catalog_shape,
    check_sum_identities,
    check_suspension,
    check_tccr,
    direct_sum,
    injectivity_check,
    level_shift,
    point_rep,
    suspend_rep,
    suspension_matches_sigma,
    verify_catalog,
    verify_rep,
)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_catalog_shapes(n):
    assert catalog_shape("ball-even", n) == {"circle_families": n, "point_families": 1, "interval_families": 0}
    assert catalog_shape("ball-odd", n) == {"circle_families": n - 1, "point_families": 0, "interval_families": 1}
    assert len(catalog("ball-even", n, cutoff=3)) == 8 * n + 1
    assert len(catalog("ball-odd", n, cutoff=3)) == 8 * (n - 1) + 5


def test_sigma_is_the_tuple_of_shifts():
    rep = build_rep(RepSpec(Family("ball-even", 3), "sigma", 0.4, 4))
    space = TruncatedSpace.cube(3, 4)
    for i in range(1, 4):
        assert max_entry_diff(rep.gen(i), weighted_shift(i, space, 0.4)) == 0.0


def test_rho_closed_form_by_hand():
    # rho_2 of the 3-ball on one index: z1 = 0, z2 = theta q^{k/2}, z3 = shift
    theta = cmath.exp(0.7j)
    q, N = 0.5, 5
    rep = build_rep(RepSpec(Family("ball-even", 3), "rho", q, N, j=2, theta=theta))
    assert rep.dim == N
    assert rep.gen(1).nnz == 0
    np.testing.assert_allclose(rep.gen(2).diagonal(), theta * q ** (np.arange(N) / 2))
    assert max_entry_diff(rep.gen(3), weighted_shift(1, TruncatedSpace((N,)), q)) == 0.0
    one_dim = build_rep(RepSpec(Family("ball-even", 3), "rho", q, N, j=1, theta=theta))
    assert one_dim.dim == 1 and one_dim.gen(3).toarray()[0, 0] == pytest.approx(theta)


def test_odd_closed_forms_by_hand():
    q, N = 0.3, 4
    fam = Family("ball-odd", 3)
    sig = build_rep(RepSpec(fam, "sigma_s", q, N, s_param=-0.5))
    levels = TruncatedSpace.cube(2, N).levels.sum(axis=1)
    np.testing.assert_allclose(sig.gen(1).diagonal(), -0.5 * q ** (levels / 2))
    eta = build_rep(RepSpec(fam, "eta", q, N, j=1, theta=1j))
    assert eta.dim == 1 and eta.gen(3).toarray()[0, 0] == pytest.approx(1j)
    assert eta.gen(1).nnz == 0 and eta.gen(2).nnz == 0


def test_spec_validation():
    fam = Family("ball-even", 2)
    with pytest.raises(InvalidParameter):
        RepSpec(fam, "rho", 0.5, 4, j=1, theta=2.0)
    with pytest.raises(InvalidParameter):
        RepSpec(fam, "sigma", 1.5, 4)
    with pytest.raises(InvalidParameter):
        RepSpec(Family("ball-odd", 2), "sigma_s", 0.5, 4, s_param=2.0)
    with pytest.raises(InvalidParameter):
        build_rep(RepSpec(fam, "rho", 0.5, 4, j=3, theta=1))
    with pytest.raises(InvalidParameter):
        build_rep(RepSpec(fam, "eta", 0.5, 4, j=1, theta=1))
    with pytest.raises(InvalidParameter):
        build_rep(RepSpec(Family("boundary-even", 2), "sigma", 0.5, 4))
    with pytest.raises(InvalidParameter):
        build_rep(RepSpec(Family("boundary-odd", 2), "sigma_s", 0.5, 4, s_param=0.5))


def test_boundary_descents():
    even = boundary_descents("boundary-even", 2, cutoff=4)
    assert {r.spec.kind for r in even} == {"rho"} and all(r.labels == ("w1", "w2") for r in even)
    odd = boundary_descents("boundary-odd", 2, cutoff=4)
    assert sorted(r.spec.s_param for r in odd if r.spec.kind == "sigma_s") == [-1.0, 1.0]
    with pytest.raises(InvalidParameter):
        boundary_descents("ball-even", 2)


@pytest.mark.parametrize("family", ["ball-even", "ball-odd", "boundary-even", "boundary-odd"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_catalog_satisfies_relations(family, n):
    report = verify_catalog(family, n, q=0.6, cutoff=6, margin=2)
    assert report.ok, [c.name for c in report.failures]


def test_sigma_does_not_descend_to_the_sphere():
    fam = Family("ball-even", 2)
    sigma = build_rep(RepSpec(fam, "sigma", 0.5, 6)).relabel(Family("boundary-even", 2))
    report = verify_rep(sigma, margin=1)
    assert not report.ok
    assert any("sum" in c.name for c in report.failures)


def test_broken_representation_is_caught():
    rep = build_rep(RepSpec(Family("ball-even", 2), "sigma", 0.5, 6))
    mats = dict(rep.matrices)
    mats["z1"] = 1.1 * mats["z1"]
    broken = Representation(rep.spec, mats, rep.blocks)
    report = verify_rep(broken)
    assert not report.ok
    assert any(c.name.startswith("positivity") for c in report.failures)


def test_verify_rep_rejects_wrong_presentation():
    rep = build_rep(RepSpec(Family("ball-even", 2), "sigma", 0.5, 4))
    with pytest.raises(InvalidParameter):
        verify_rep(rep, build_presentation("ball-odd", 2))


def test_direct_sum_blocks():
    fam = Family("ball-even", 2)
    a = build_rep(RepSpec(fam, "rho", 0.5, 5, j=2, theta=1))
    b = build_rep(RepSpec(fam, "sigma", 0.5, 5))
    s = direct_sum([a, b])
    assert s.dim == a.dim + b.dim
    assert len(s.blocks) == 2
    assert len(s.interior(2)) == len(a.interior(2)) + len(b.interior(2))
    assert verify_rep(s).ok
    with pytest.raises(InvalidParameter):
        s.space
    with pytest.raises(InvalidParameter):
        direct_sum([])
    with pytest.raises(InvalidParameter):
        direct_sum([a, build_rep(RepSpec(fam, "sigma", 0.3, 5))])


def test_level_shift():
    W = level_shift(4, 0.5).toarray()
    np.testing.assert_allclose(np.diag(W, -1), np.sqrt(1 - 0.5 ** np.arange(1, 4)))
    Wx = level_shift(4, 0.5, overflow=True)
    assert Wx.shape == (5, 4)
    np.testing.assert_allclose((adjoint(Wx) @ Wx).diagonal(), 1 - 0.5 ** np.arange(1, 5))


@pytest.mark.parametrize("n", [1, 2])
def test_suspension_of_sigma_is_sigma(n):
    assert suspension_matches_sigma(n, 0.5, 6).ok


def test_suspension_of_a_point_is_the_disc():
    sus = suspend_rep(point_rep(0.5), 6)
    assert sus.family == Family("ball-even", 1)
    assert max_entry_diff(sus.gen(1), weighted_shift(1, TruncatedSpace((6,)), 0.5)) == 0.0
    assert check_suspension(point_rep(0.5), 6).ok


@pytest.mark.parametrize("kind", ["sigma", "rho"])
def test_suspension_identities(kind):
    fam = Family("ball-even", 2)
    rep = build_rep(RepSpec(fam, kind, 0.4, 5, j=1 if kind == "rho" else None, theta=1j if kind == "rho" else None))
    report = check_suspension(rep, 6)
    assert report.ok, report.failures
    assert verify_rep(suspend_rep(rep, 6)).ok


def test_suspension_validation():
    with pytest.raises(InvalidParameter):
        suspend_rep(point_rep(0.5), 0)


@pytest.mark.parametrize("n", [1, 2])
def test_sum_identities(n):
    report = check_sum_identities(n, 0.5, cutoff=4, terms=range(0, 9))
    assert report.ok, [(c.name, c.value) for c in report.failures]
    # errors really decay: eight terms are much better than none
    assert report[f"Z{n + 1} with 8 terms"].value < 1e-2 * report[f"Z{n + 1} with 0 terms"].value


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tccr(n):
    assert check_tccr(n, 0.3, cutoff=6).ok


def test_tccr_detects_wrong_normalisation():
    # without the 1/sqrt(1-q) factor the CCR fails
    rep = build_rep(RepSpec(Family("ball-even", 1), "sigma", 0.5, 6))
    a = adjoint(rep.gen(1))
    idx = rep.interior(1)
    lhs = (a @ adjoint(a) - 0.5 * adjoint(a) @ a - sp.identity(6)).toarray()[np.ix_(idx, idx)]
    assert np.abs(lhs).max() > 0.1


@pytest.mark.parametrize("q", [0.3, 0.6])
def test_normality_witness(q):
    sigma = build_rep(RepSpec(Family("ball-even", 2), "sigma", q, 6))
    res = injectivity_check(sigma)
    assert res.criterion == "normality" and res.injective
    assert res.witness == pytest.approx(1 - q, abs=1e-10)
    for rep in catalog("ball-even", 2, q=q, cutoff=6):
        if rep.spec.kind == "rho":
            assert not injectivity_check(rep).injective


def test_sign_spectrum_witness():
    plus, minus = (build_rep(RepSpec(Family("boundary-odd", 2), "sigma_s", 0.5, 6, s_param=s)) for s in (1.0, -1.0))
    both = direct_sum([plus, minus])
    res = injectivity_check(both)
    assert res.criterion == "sign-spectrum" and res.injective
    lo, hi = res.witness
    assert lo == pytest.approx(-1.0) and hi == pytest.approx(1.0)
    assert not injectivity_check(plus).injective


def test_circle_cover():
    fam = Family("boundary-even", 2)
    thetas = [cmath.exp(2j * math.pi * k / 32) for k in range(32)]
    reps = [build_rep(RepSpec(fam, "rho", 0.5, 4, j=2, theta=t)) for t in thetas]
    assert injectivity_check(direct_sum(reps)).injective
    assert not injectivity_check(reps[0]).injective


def test_injectivity_criterion_must_fit_family():
    rep = build_rep(RepSpec(Family("ball-odd", 2), "sigma_s", 0.5, 4, s_param=0.0))
    with pytest.raises(InvalidParameter):
        injectivity_check(rep)
    sigma = build_rep(RepSpec(Family("ball-even", 2), "sigma", 0.5, 4))
    with pytest.raises(InvalidParameter):
        injectivity_check(sigma, criterion="sign-spectrum")


def test_relabel_requires_same_size():
    rep = build_rep(RepSpec(Family("ball-even", 2), "sigma", 0.5, 4))
    with pytest.raises(InvalidParameter):
        rep.relabel(Family("boundary-even", 3))
    assert replace(rep.spec, q=0.3).q == 0.3
