"""Finite directed graphs, Cuntz-Krieger families on path spaces, K-theory by
Smith normal form, and hereditary saturated vertex sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import InvalidParameter, UnsupportedGraph
from .report import VerificationReport

GRAPH_KINDS = ("M", "L-odd", "L-even")


@dataclass(frozen=True)
class DirectedGraph:
    """Vertices 0..n_vertices-1 and edges as (source, range) pairs; names are display labels."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    vertex_names: tuple[str, ...] = ()
    edge_names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(s), int(r)) for s, r in self.edges))
        if self.n_vertices < 0:
            raise InvalidParameter("vertex count must be nonnegative")
        for s, r in self.edges:
            if not (0 <= s < self.n_vertices and 0 <= r < self.n_vertices):
                raise InvalidParameter(f"edge {s}->{r} has an endpoint outside 0..{self.n_vertices - 1}")
        if not self.vertex_names:
            object.__setattr__(self, "vertex_names", tuple(f"v{i + 1}" for i in range(self.n_vertices)))
        if not self.edge_names:
            object.__setattr__(self, "edge_names", tuple(f"e{k + 1}" for k in range(len(self.edges))))

    def out_edges(self, v: int) -> list[int]:
        return [k for k, (s, _) in enumerate(self.edges) if s == v]

    def in_edges(self, v: int) -> list[int]:
        return [k for k, (_, r) in enumerate(self.edges) if r == v]

    @property
    def sinks(self) -> list[int]:
        emitting = {s for s, _ in self.edges}
        return [v for v in range(self.n_vertices) if v not in emitting]

    @property
    def regular(self) -> list[int]:
        emitting = {s for s, _ in self.edges}
        return [v for v in range(self.n_vertices) if v in emitting]

    def adjacency(self) -> list[list[int]]:
        A = [[0] * self.n_vertices for _ in range(self.n_vertices)]
        for s, r in self.edges:
            A[s][r] += 1
        return A

    def permuted(self, perm: Sequence[int]) -> "DirectedGraph":
        """Relabel vertex v as perm[v]."""
        names = [""] * self.n_vertices
        for v, p in enumerate(perm):
            names[p] = self.vertex_names[v]
        return DirectedGraph(
            self.n_vertices, tuple((perm[s], perm[r]) for s, r in self.edges), tuple(names), self.edge_names
        )

    def to_text(self) -> str:
        """Edge-list text: the vertex count on the first line, then one 1-based 'src>dst' per line."""
        lines = [str(self.n_vertices)] + [f"{s + 1}>{r + 1}" for s, r in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DirectedGraph":
        tokens = [t.strip() for t in text.replace(";", "\n").splitlines()]
        tokens = [t for t in tokens if t and not t.startswith("#")]
        if not tokens:
            raise InvalidParameter("empty graph description")
        try:
            n = int(tokens[0])
        except ValueError as exc:
            raise InvalidParameter(f"first entry must be the vertex count, got {tokens[0]!r}") from exc
        edges = []
        for t in tokens[1:]:
            src, sep, dst = t.partition(">")
            if not sep:
                raise InvalidParameter(f"edge {t!r} is not of the form src>dst")
            try:
                edges.append((int(src) - 1, int(dst) - 1))
            except ValueError as exc:
                raise InvalidParameter(f"edge {t!r} has a non-integer endpoint") from exc
        return cls(n, tuple(edges))


def build_graph(kind: str, n: int) -> DirectedGraph:
    """M(n), L(odd, n) or L(even, n); kinds are 'M', 'L-odd', 'L-even'."""
    if kind not in GRAPH_KINDS:
        raise InvalidParameter(f"unknown graph {kind!r}; expected one of {GRAPH_KINDS}")
    if not isinstance(n, int) or n < 1:
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    if kind == "M":
        edges = [(i - 1, j - 1) for i in range(1, n + 1) for j in range(i, n + 2)]
        names = [f"e{i},{j}" for i in range(1, n + 1) for j in range(i, n + 2)]
        return DirectedGraph(n + 1, tuple(edges), edge_names=tuple(names))
    if kind == "L-odd":
        edges = [(i - 1, j - 1) for i in range(1, n + 1) for j in range(i, n + 1)]
        names = [f"e{i},{j}" for i in range(1, n + 1) for j in range(i, n + 1)]
        return DirectedGraph(n, tuple(edges), edge_names=tuple(names))
    # L(even, n): the loop vertex v_n of L(odd, n) becomes two loop-free sinks a, b,
    # each receiving a copy of every edge that ended at v_n.
    a, b = n - 1, n
    edges, names = [], []
    for i in range(1, n):
        for j in range(i, n):
            edges.append((i - 1, j - 1))
            names.append(f"e{i},{j}")
        edges += [(i - 1, a), (i - 1, b)]
        names += [f"e{i},{n}a", f"e{i},{n}b"]
    vnames = tuple(f"v{i}" for i in range(1, n)) + (f"v{n}a", f"v{n}b")
    return DirectedGraph(n + 1, tuple(edges), vnames, tuple(names))


# --- Smith normal form -------------------------------------------------------------


def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (D, U, V) with U M V = D diagonal, d_1 | d_2 | ..., U and V unimodular.

    Pivot: the smallest nonzero absolute value in the remaining block, ties
    broken by lowest row, then lowest column.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            candidates = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not candidates:
                return A, U, V
            _, pi, pj = min(candidates)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return A, U, V


def invariant_factors(M: Sequence[Sequence[int]]) -> list[int]:
    D, _, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank plus the cyclic factors Z/d for d in torsion (each dividing the next)."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0 or any(d < 2 for d in self.torsion):
            raise InvalidParameter(f"invalid abelian group data {self.rank}, {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise InvalidParameter(f"invariant factors {self.torsion} do not divide successively")

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def cokernel(M: Sequence[Sequence[int]], rows: int) -> tuple[AbelianGroup, list[list[int]], list[int]]:
    """Cokernel of an integer matrix with ``rows`` rows; also returns U and the diagonal of D."""
    if not M or not M[0]:
        return AbelianGroup(rows), _identity(rows), [0] * rows
    D, U, _ = smith_normal_form(M)
    diag = [D[i][i] if i < len(D[0]) else 0 for i in range(rows)]
    free = sum(1 for d in diag if d == 0)
    torsion = tuple(abs(d) for d in diag if abs(d) > 1)
    return AbelianGroup(free, torsion), U, diag


def kernel_rank(M: Sequence[Sequence[int]], cols: int) -> int:
    if not M or cols == 0:
        return cols
    return cols - sum(1 for d in invariant_factors(M) if d)


@dataclass(frozen=True)
class GraphKTheory:
    K0: AbelianGroup
    K1: AbelianGroup
    vertex_classes: dict[str, tuple[int, ...]]
    unit_class: tuple[int, ...]
    factors: tuple[int, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "K0": self.K0.to_dict(),
            "K1": self.K1.to_dict(),
            "vertex_classes": {k: list(v) for k, v in self.vertex_classes.items()},
            "unit_class": list(self.unit_class),
        }

    def generated_by(self, classes: Iterable[Sequence[int]]) -> bool:
        """Do the given K0 coordinate vectors generate the whole group?"""
        classes = [list(c) for c in classes]
        size = self.K0.rank + len(self.K0.torsion)
        if size == 0:
            return True
        cols = classes + [[d if k == self.K0.rank + t else 0 for k in range(size)] for t, d in enumerate(self.K0.torsion)]
        if not cols:
            return False
        M = [list(r) for r in zip(*cols)]
        group, _, _ = cokernel(M, size)
        return group.is_trivial()


def ktheory_graph(graph: DirectedGraph) -> GraphKTheory:
    """K_0 = coker and K_1 = ker of (I - A^t) restricted to regular vertices."""
    A = graph.adjacency()
    reg = graph.regular
    nv = graph.n_vertices
    cols = []
    for v in reg:
        cols.append([int(w == v) - A[v][w] for w in range(nv)])
    M = [list(r) for r in zip(*cols)] if cols else []
    K1 = AbelianGroup(kernel_rank(M, len(reg)))
    K0, U, diag = cokernel(M, nv)
    # coordinates of e_v in the SNF basis: U e_v, keeping free slots and torsion slots mod d
    keep_free = [i for i, d in enumerate(diag) if d == 0]
    keep_tors = [(i, abs(d)) for i, d in enumerate(diag) if abs(d) > 1]

    def coords(vec: list[int]) -> tuple[int, ...]:
        img = [sum(U[i][k] * vec[k] for k in range(nv)) for i in range(nv)]
        return tuple(img[i] for i in keep_free) + tuple(img[i] % d for i, d in keep_tors)

    vertex_classes = {graph.vertex_names[v]: coords([int(k == v) for k in range(nv)]) for v in range(nv)}
    unit = coords([1] * nv)
    return GraphKTheory(K0, K1, vertex_classes, unit, tuple(diag))


# --- hereditary saturated sets -------------------------------------------------------


def hereditary_saturated_lattice(graph: DirectedGraph) -> list[frozenset[int]]:
    """All hereditary saturated vertex sets, sorted by size then contents (a linear extension of inclusion)."""
    nv = graph.n_vertices
    succ = [set() for _ in range(nv)]
    for s, r in graph.edges:
        succ[s].add(r)
    reg = set(graph.regular)
    found = []
    for bits in itertools.product((0, 1), repeat=nv):
        H = frozenset(v for v in range(nv) if bits[v])
        if any(not succ[v] <= H for v in H):
            continue
        if any(v not in H and succ[v] <= H for v in reg):
            continue
        found.append(H)
    return sorted(found, key=lambda h: (len(h), sorted(h)))


def is_chain(sets: Sequence[frozenset[int]]) -> bool:
    return all(a <= b for a, b in zip(sets, sets[1:]))


# --- Cuntz-Krieger family on a path space ----------------------------------------------


@dataclass(frozen=True)
class CKFamily:
    """Exact P_v and S_e on the span of paths (edge tuples) ending at a sink, length <= max_len."""

    graph: DirectedGraph
    max_len: int
    sink: int
    paths: tuple[tuple[int, ...], ...]
    projections: tuple[DomainMatrix, ...]
    partial_isometries: tuple[DomainMatrix, ...]

    @property
    def dim(self) -> int:
        return len(self.paths)

    def start(self, path: tuple[int, ...]) -> int:
        return self.graph.edges[path[0]][0] if path else self.sink

    def short_indices(self, max_len: int | None = None) -> list[int]:
        limit = self.max_len - 1 if max_len is None else max_len
        return [i for i, p in enumerate(self.paths) if len(p) <= limit]

    def identity(self, domain=ZZ) -> DomainMatrix:
        return DomainMatrix({i: {i: domain.one} for i in range(self.dim)}, (self.dim, self.dim), domain)


def _paths_to(graph: DirectedGraph, sink: int, max_len: int) -> list[tuple[int, ...]]:
    layer = [()]
    out = [()]
    for _ in range(max_len):
        nxt = []
        for path in layer:
            head = graph.edges[path[0]][0] if path else sink
            for k in graph.in_edges(head):
                nxt.append((k,) + path)
        nxt.sort()
        out += nxt
        layer = nxt
    return out


def path_ck_family(graph: DirectedGraph, max_len: int) -> CKFamily:
    """Concrete CK family on paths ending at the unique sink (which must be reachable from every vertex)."""
    if max_len < 1:
        raise InvalidParameter(f"max_len must be >= 1, got {max_len}")
    sinks = graph.sinks
    if len(sinks) != 1:
        raise UnsupportedGraph(f"need exactly one sink, found {len(sinks)}")
    sink = sinks[0]
    reach = {sink}
    changed = True
    while changed:
        changed = False
        for s, r in graph.edges:
            if r in reach and s not in reach:
                reach.add(s)
                changed = True
    if len(reach) != graph.n_vertices:
        raise UnsupportedGraph("the sink is not reachable from every vertex")
    paths = _paths_to(graph, sink, max_len)
    index = {p: i for i, p in enumerate(paths)}
    dim = len(paths)

    def start(p):
        return graph.edges[p[0]][0] if p else sink

    projections = []
    for v in range(graph.n_vertices):
        rows = {i: {i: ZZ.one} for i, p in enumerate(paths) if start(p) == v}
        projections.append(DomainMatrix(rows, (dim, dim), ZZ))
    isometries = []
    for k, (_, r) in enumerate(graph.edges):
        rows: dict[int, dict[int, object]] = {}
        for i, p in enumerate(paths):
            if start(p) == r and len(p) < max_len:
                rows.setdefault(index[(k,) + p], {})[i] = ZZ.one
        isometries.append(DomainMatrix(rows, (dim, dim), ZZ))
    return CKFamily(graph, max_len, sink, tuple(paths), tuple(projections), tuple(isometries))


def dm_adjoint(M: DomainMatrix) -> DomainMatrix:
    """Conjugate transpose; conjugation is manual for Gaussian rationals."""
    T = M.transpose()
    if M.domain.is_ZZ or M.domain.is_QQ:
        return T
    dom = M.domain
    rows = {i: {j: dom(v.x, -v.y) for j, v in row.items()} for i, row in T.to_sdm().items()}
    return DomainMatrix(rows, T.shape, dom)


def dm_compress(M: DomainMatrix, idx: Sequence[int]) -> DomainMatrix:
    pos = {g: k for k, g in enumerate(idx)}
    rows = {}
    for i, row in M.to_sdm().items():
        if i in pos:
            kept = {pos[j]: v for j, v in row.items() if j in pos and v}
            if kept:
                rows[pos[i]] = kept
    return DomainMatrix(rows, (len(idx), len(idx)), M.domain)


def dm_rank(M: DomainMatrix) -> int:
    if M.domain.is_ZZ:
        M = M.convert_to(QQ)
    return M.rank()


def _nonzero_entries(M: DomainMatrix, cols: set[int]) -> list[tuple[int, int]]:
    return sorted((i, j) for i, row in M.to_sdm().items() for j, v in row.items() if v and j in cols)


def verify_ck(fam: CKFamily) -> VerificationReport:
    """Both Cuntz-Krieger relation families, exactly, on paths of length <= max_len - 1."""
    g = fam.graph
    cols = set(fam.short_indices())
    report = VerificationReport(f"CK relations on paths of length <= {fam.max_len - 1}")
    for v, P in enumerate(fam.projections):
        bad = _nonzero_entries(P * P - P, set(range(fam.dim)))
        report.add(f"P_{g.vertex_names[v]} is a projection", not bad, len(bad))
    for v in range(g.n_vertices):
        for w in range(v + 1, g.n_vertices):
            bad = _nonzero_entries(fam.projections[v] * fam.projections[w], set(range(fam.dim)))
            if bad:
                report.add(f"P_{g.vertex_names[v]} P_{g.vertex_names[w]} = 0", False, len(bad))
    for k, (s, r) in enumerate(g.edges):
        S = fam.partial_isometries[k]
        bad = _nonzero_entries(dm_adjoint(S) * S - fam.projections[r], cols)
        report.add(f"S_{g.edge_names[k]}* S_{g.edge_names[k]} = P_{g.vertex_names[r]}", not bad, len(bad))
    for v in g.regular:
        total = fam.projections[v] * ZZ(-1)
        for k in g.out_edges(v):
            S = fam.partial_isometries[k]
            total = total + S * dm_adjoint(S)
        bad = _nonzero_entries(total, cols)
        report.add(f"sum over edges from {g.vertex_names[v]} of S S* = P_{g.vertex_names[v]}", not bad, len(bad))
    return report


def graph_from_spec(text: str) -> DirectedGraph:
    """Parse 'M', 'L-odd', 'L-even' names with an n suffix like 'M:3', or an edge list."""
    kind, sep, n = text.partition(":")
    if sep and kind in GRAPH_KINDS:
        return build_graph(kind, int(n))
    return DirectedGraph.from_text(text)
