import itertools
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from ncball.errors import InvalidParameter, UnsupportedGraph
from ncball.graphs import (
    AbelianGroup,
    DirectedGraph,
    build_graph,
    cokernel,
    graph_from_spec,
    hereditary_saturated_lattice,
    invariant_factors,
    is_chain,
    kernel_rank,
    ktheory_graph,
    path_ck_family,
    smith_normal_form,
    verify_ck,
)


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _det(M):
    return int(Matrix(M).det())


int_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150)
@given(int_matrices)
def test_snf_against_sympy(M):
    D, U, V = smith_normal_form(M)
    assert _matmul(_matmul(U, M), V) == D
    assert abs(_det(U)) == 1 and abs(_det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(d >= 0 for d in diag)
    off = [D[i][j] for i in range(len(D)) for j in range(len(D[0])) if i != j]
    assert not any(off)
    nonzero = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    oracle = sympy_snf(Matrix(M), domain=ZZ)
    expected = [abs(int(oracle[i, i])) for i in range(min(oracle.shape))]
    assert sorted(diag) == sorted(expected)


def test_snf_examples():
    assert invariant_factors([[2, 0], [0, 3]]) == [1, 6]
    assert invariant_factors([[-1], [1]]) == [1]
    group, _, _ = cokernel([[-1], [1]], 2)
    assert group == AbelianGroup(1)
    group, _, _ = cokernel([[2, 4], [6, 8]], 2)
    assert group == AbelianGroup(0, (2, 4))
    assert kernel_rank([[1, 1], [2, 2]], 2) == 1


def test_abelian_group_validation_and_printing():
    assert str(AbelianGroup(2, (2,))) == "Z^2 + Z/2"
    assert str(AbelianGroup(0)) == "0"
    with pytest.raises(InvalidParameter):
        AbelianGroup(0, (2, 3))
    with pytest.raises(InvalidParameter):
        AbelianGroup(-1)


def test_graph_shapes():
    for n in range(1, 6):
        M = build_graph("M", n)
        assert M.n_vertices == n + 1 and len(M.edges) == n * (n + 3) // 2
        assert M.sinks == [n]
        L = build_graph("L-odd", n)
        assert len(L.edges) == n * (n + 1) // 2 and L.sinks == []
        E = build_graph("L-even", n)
        assert len(E.sinks) == 2
    with pytest.raises(InvalidParameter):
        build_graph("Q", 2)
    with pytest.raises(InvalidParameter):
        build_graph("M", 0)


@pytest.mark.parametrize("n", range(1, 6))
def test_ktheory_table(n):
    m = ktheory_graph(build_graph("M", n))
    assert (m.K0, m.K1) == (AbelianGroup(1), AbelianGroup(0))
    lo = ktheory_graph(build_graph("L-odd", n))
    assert (lo.K0, lo.K1) == (AbelianGroup(1), AbelianGroup(1))
    le = ktheory_graph(build_graph("L-even", n))
    assert (le.K0, le.K1) == (AbelianGroup(2), AbelianGroup(0))


@pytest.mark.parametrize("n", range(1, 5))
def test_unit_generates_k0_of_the_ball_graph(n):
    kt = ktheory_graph(build_graph("M", n))
    assert kt.generated_by([kt.unit_class])
    assert kt.generated_by([kt.vertex_classes["v1"]])
    # the sink projection is a difference of the others and vanishes in K_0
    assert kt.vertex_classes[f"v{n + 1}"] == (0,)


def test_known_small_graphs():
    # one vertex, two loops: the Cuntz algebra O_2 has K_0 = 0 = K_1
    o2 = ktheory_graph(DirectedGraph(1, ((0, 0), (0, 0))))
    assert o2.K0.is_trivial() and o2.K1.is_trivial()
    # one vertex, three loops: K_0 = Z/2
    o3 = ktheory_graph(DirectedGraph(1, ((0, 0),) * 3))
    assert o3.K0 == AbelianGroup(0, (2,)) and o3.K1.is_trivial()
    # a cycle of length 3: C(T) (x) M_3, K_0 = K_1 = Z
    cyc = ktheory_graph(DirectedGraph(3, ((0, 1), (1, 2), (2, 0))))
    assert cyc.K0 == AbelianGroup(1) and cyc.K1 == AbelianGroup(1)
    # a single vertex without edges: C
    pt = ktheory_graph(DirectedGraph(1, ()))
    assert pt.K0 == AbelianGroup(1) and pt.K1.is_trivial()


@pytest.mark.parametrize("kind", ["M", "L-odd", "L-even"])
def test_ktheory_is_permutation_invariant(kind):
    g = build_graph(kind, 3)
    base = ktheory_graph(g)
    for perm in itertools.islice(itertools.permutations(range(g.n_vertices)), 0, None, 5):
        other = ktheory_graph(g.permuted(perm))
        assert (other.K0, other.K1) == (base.K0, base.K1)


@pytest.mark.parametrize("n", range(1, 7))
def test_lattice_of_the_ball_graph_is_a_chain(n):
    lattice = hereditary_saturated_lattice(build_graph("M", n))
    assert len(lattice) == n + 2
    assert is_chain(lattice)
    assert lattice[0] == frozenset() and lattice[-1] == frozenset(range(n + 1))


def test_lattice_by_brute_force_definition():
    g = build_graph("L-even", 2)
    lattice = set(hereditary_saturated_lattice(g))
    expected = set()
    for size in range(g.n_vertices + 1):
        for H in map(frozenset, itertools.combinations(range(g.n_vertices), size)):
            hereditary = all(r in H for s, r in g.edges if s in H)
            saturated = all(
                v in H for v in g.regular if all(g.edges[k][1] in H for k in g.out_edges(v))
            )
            if hereditary and saturated:
                expected.add(H)
    assert lattice == expected
    assert not is_chain(hereditary_saturated_lattice(g))
    assert hereditary_saturated_lattice(build_graph("L-odd", 1)) == [frozenset(), frozenset({0})]


def test_text_roundtrip():
    for kind in ("M", "L-odd", "L-even"):
        g = build_graph(kind, 3)
        h = DirectedGraph.from_text(g.to_text())
        assert h.edges == g.edges and h.n_vertices == g.n_vertices
    assert graph_from_spec("M:2").edges == build_graph("M", 2).edges
    assert graph_from_spec("2;1>1;1>2").edges == ((0, 0), (0, 1))
    for bad in ("", "x", "2;1-2", "2;1>3", "2;a>1"):
        with pytest.raises(InvalidParameter):
            graph_from_spec(bad)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ck_relations_hold(n):
    fam = path_ck_family(build_graph("M", n), 5)
    assert verify_ck(fam).ok


def test_ck_path_counts():
    fam = path_ck_family(build_graph("M", 1), 4)
    # paths into the sink: the trivial one plus loop^k followed by the edge to the sink
    assert fam.dim == 1 + 4
    assert fam.paths[0] == ()
    assert fam.projections[1].rank() == 1


def test_zeroed_partial_isometry_breaks_completeness():
    g = build_graph("M", 2)
    fam = path_ck_family(g, 4)
    k = g.edges.index((0, 1))
    zeroed = list(fam.partial_isometries)
    zeroed[k] = fam.partial_isometries[k] * ZZ(0)
    broken = replace(fam, partial_isometries=tuple(zeroed))
    report = verify_ck(broken)
    failed = {c.name for c in report.failures}
    assert "sum over edges from v1 of S S* = P_v1" in failed
    assert f"S_{g.edge_names[k]}* S_{g.edge_names[k]} = P_v2" in failed


def test_ck_family_needs_a_single_reachable_sink():
    with pytest.raises(UnsupportedGraph):
        path_ck_family(build_graph("L-odd", 2), 4)
    with pytest.raises(UnsupportedGraph):
        path_ck_family(build_graph("L-even", 2), 4)
    with pytest.raises(UnsupportedGraph):
        path_ck_family(DirectedGraph(3, ((0, 1),)), 3)
    with pytest.raises(InvalidParameter):
        path_ck_family(build_graph("M", 1), 0)
