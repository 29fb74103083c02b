"""Analysis of unions of one-factors.

A union of 2 or 3 one-factors is a small 3-uniform hypergraph (every vertex
has degree = number of factors).  This module decides connectivity, counts
the pair overlap of two factors both combinatorially and via the
closed-form case analysis of the defining maps, searches for isomorphisms
between unions, and searches for Hamilton Berge cycles.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

from .field import FiniteField
from .factorisation import Edge, OneFactor
from .projline import base_map


class DuplicateFactorError(ValueError):
    """Union requires pairwise distinct factors."""


class SameFactorError(ValueError):
    """Pair overlap requires two distinct factors."""


class IsBaseFactorError(ValueError):
    """The label denotes the base factor itself."""


class SizeMismatchError(ValueError):
    """Isomorphism requires equal vertex counts."""


class _UnionFind:
    __slots__ = ("parent", "size", "components")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = n

    def find(self, i: int) -> int:
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return
        if self.size[ri] < self.size[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        self.size[ri] += self.size[rj]
        self.components -= 1


class UnionHypergraph:
    """Edges of 2-3 one-factors with incidence lists and source tags."""

    __slots__ = ("n", "edges", "tags", "incidence")

    def __init__(self, n: int, edges: list[Edge], tags: list[int]):
        self.n = n
        self.edges = edges
        self.tags = tags
        incidence: list[list[int]] = [[] for _ in range(n)]
        for i, e in enumerate(edges):
            for v in e:
                incidence[v].append(i)
        self.incidence = incidence

    def degree_sequence(self) -> list[int]:
        return sorted(len(inc) for inc in self.incidence)


def union_hypergraph(n: int, factors: list[OneFactor]) -> UnionHypergraph:
    """Concatenate the edge lists of 2-3 pairwise distinct factors."""
    if not 2 <= len(factors) <= 3:
        raise ValueError("union takes 2 or 3 factors")
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            if factors[i].edges == factors[j].edges:
                raise DuplicateFactorError("factors must be distinct")
    edges: list[Edge] = []
    tags: list[int] = []
    for t, f in enumerate(factors):
        edges.extend(f.edges)
        tags.extend([t] * len(f.edges))
    return UnionHypergraph(n, edges, tags)


def is_connected(h: UnionHypergraph) -> bool:
    uf = _UnionFind(h.n)
    for a, b, c in h.edges:
        uf.union(a, b)
        uf.union(a, c)
    return uf.components == 1


def components(h: UnionHypergraph) -> list[list[int]]:
    """Vertex components, each sorted, ordered by smallest member."""
    uf = _UnionFind(h.n)
    for a, b, c in h.edges:
        uf.union(a, b)
        uf.union(a, c)
    groups: dict[int, list[int]] = {}
    for v in range(h.n):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values())


# -- pair overlap ------------------------------------------------------------


@dataclass
class OverlapResult:
    """Repeated vertex pairs between two one-factors.

    When computed algebraically, direct_solutions and inverse_solutions list
    the points solving base(x) = m(x) and base^-1(x) = m(x); the overlap
    count is the sum of their sizes.
    """

    count: int
    repeated_pairs: list[tuple[int, int]]
    direct_solutions: list[int] | None = None
    inverse_solutions: list[int] | None = None


def pair_overlap(f1: OneFactor, f2: OneFactor) -> OverlapResult:
    """Count vertex pairs covered by an edge of each factor (combinatorial)."""
    if f1.edges == f2.edges:
        raise SameFactorError("pair overlap needs two distinct factors")
    common = f1.pair_set() & f2.pair_set()
    return OverlapResult(len(common), sorted(common))


def pair_overlap_algebraic(ctx: FiniteField, a: int, b: int) -> OverlapResult:
    """Overlap of the base factor with factor (a, b) by case analysis.

    Splits on b = 0 / b = 1 / a + b = 1 / a + b = 0 exactly as the solution
    tables for base(x) = m(x) and base^-1(x) = m(x) dictate, falling back to
    the two quadratics in the general case.  Must agree with pair_overlap.
    """
    if a == 0:
        raise IsBaseFactorError("label scale must be nonzero")
    one = 1
    neg1 = ctx.neg(1)
    if (a, b) in {(1, 0), (neg1, 1)}:
        raise IsBaseFactorError("label denotes the base factor")
    inf = ctx.q

    # base(x) = m(x)
    if b == 0:
        if a == neg1:
            direct = {inf}
        else:
            direct = {inf, ctx.div(a, ctx.add(one, a))}
    elif ctx.add(a, b) == one:
        direct = {one, ctx.neg(a)}
    else:
        aa = ctx.mul(a, a)
        ab = ctx.mul(a, b)
        bb = ctx.mul(b, b)
        s = ctx.add(aa, ctx.add(ab, bb))  # a^2 + ab + b^2
        coef_b = ctx.neg(ctx.sub(ctx.add(s, b), one))
        coef_c = ctx.sub(s, ctx.add(a, b))
        direct = ctx.solve_quadratic(b, coef_b, coef_c)

    # base^-1(x) = m(x)
    if b == one:
        if a == one:
            inverse = {inf}
        else:
            inverse = {inf, ctx.inv(ctx.sub(one, a))}
    elif ctx.add(a, b) == 0:
        inverse = {0, ctx.sub(one, a)}
    else:
        aa = ctx.mul(a, a)
        ab = ctx.mul(a, b)
        bb = ctx.mul(b, b)
        s = ctx.add(aa, ctx.add(ab, bb))
        coef_a = ctx.sub(one, b)
        coef_b = ctx.sub(s, ctx.add(ctx.add(a, b), one))
        coef_c = ctx.add(a, b)
        inverse = ctx.solve_quadratic(coef_a, coef_b, coef_c)

    f = base_map(ctx)
    f_inv = f.inverse()
    pairs = [tuple(sorted((x, f(x)))) for x in direct]
    pairs += [tuple(sorted((x, f_inv(x)))) for x in inverse]
    assert len(set(pairs)) == len(pairs)
    return OverlapResult(
        len(direct) + len(inverse),
        sorted(set(pairs)),
        sorted(direct),
        sorted(inverse),
    )


# -- isomorphism -------------------------------------------------------------


def _pair_degrees(h: UnionHypergraph) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = {}
    for x, y, z in h.edges:
        for pair in ((x, y), (x, z), (y, z)):
            out[pair] = out.get(pair, 0) + 1
    return out


def find_isomorphism(h1: UnionHypergraph, h2: UnionHypergraph) -> list[int] | None:
    """A vertex bijection mapping edges of h1 onto edges of h2, or None.

    Backtracking over vertex images, pruned by degree, by pair-cover counts
    against already-mapped vertices, and by full-edge membership once an
    edge's vertices are all placed.  Exact; intended for n <= 33.
    """
    if h1.n != h2.n:
        raise SizeMismatchError(f"vertex counts differ: {h1.n} != {h2.n}")
    if len(h1.edges) != len(h2.edges):
        return None
    deg1 = [len(inc) for inc in h1.incidence]
    deg2 = [len(inc) for inc in h2.incidence]
    if sorted(deg1) != sorted(deg2):
        return None
    if sorted(len(c) for c in components(h1)) != sorted(
        len(c) for c in components(h2)
    ):
        return None
    pd1 = _pair_degrees(h1)
    pd2 = _pair_degrees(h2)
    if sorted(pd1.values()) != sorted(pd2.values()):
        return None

    n = h1.n
    edge_multiset2: dict[Edge, int] = {}
    for e in h2.edges:
        edge_multiset2[e] = edge_multiset2.get(e, 0) + 1
    edge_multiset1: dict[Edge, int] = {}
    for e in h1.edges:
        edge_multiset1[e] = edge_multiset1.get(e, 0) + 1

    # order vertices of h1 so each new vertex touches mapped ones when possible
    order: list[int] = []
    placed = [False] * n
    for start in sorted(range(n), key=lambda v: -deg1[v]):
        if placed[start]:
            continue
        queue = [start]
        placed[start] = True
        while queue:
            v = queue.pop(0)
            order.append(v)
            for ei in h1.incidence[v]:
                for w in h1.edges[ei]:
                    if not placed[w]:
                        placed[w] = True
                        queue.append(w)

    mapping = [-1] * n
    used = [False] * n

    def pair_key(u: int, v: int) -> tuple[int, int]:
        return (u, v) if u < v else (v, u)

    def feasible(v: int, w: int) -> bool:
        if deg1[v] != deg2[w]:
            return False
        for u in order:
            mu = mapping[u]
            if mu < 0 or u == v:
                continue
            c1 = pd1.get(pair_key(u, v), 0)
            c2 = pd2.get(pair_key(mu, w), 0)
            if c1 != c2:
                return False
        # any fully-mapped edge must land on an edge of h2 with same multiplicity
        for ei in h1.incidence[v]:
            e = h1.edges[ei]
            if all(mapping[x] >= 0 or x == v for x in e):
                img = tuple(sorted(w if x == v else mapping[x] for x in e))
                if edge_multiset2.get(img, 0) != edge_multiset1[e]:
                    return False
        return True

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if used[w] or not feasible(v, w):
                continue
            mapping[v] = w
            used[w] = True
            if extend(i + 1):
                return True
            mapping[v] = -1
            used[w] = False
        return False

    if extend(0):
        return mapping
    return None


def apply_isomorphism(h: UnionHypergraph, mapping: list[int]) -> set[Edge]:
    """Image of h's edge set under a vertex mapping (for replay checks)."""
    return {tuple(sorted(mapping[v] for v in e)) for e in h.edges}


# -- Hamilton Berge cycles ---------------------------------------------------


@dataclass
class BergeSearchResult:
    """Outcome of a Hamilton Berge cycle search.

    status is "found", "none" or "timeout"; a timeout is not a
    counterexample.  On success vertices[i] and vertices[i+1] both lie in
    edges[i], with the last edge closing back to vertices[0].
    """

    status: str
    vertices: list[int] = dc_field(default_factory=list)
    edge_indices: list[int] = dc_field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == "found"


def _cycle_by_leftout(h: UnionHypergraph, deadline: float) -> BergeSearchResult:
    """Hamilton Berge cycle search for the exact case (n edges, n vertices).

    A Hamilton Berge cycle here uses every edge once, each edge hosting one
    consecutive vertex pair and leaving out its third vertex.  Summing
    degrees, every vertex is left out by exactly one of its incident edges:
    the left-out map is a bijection between edges and vertices, and the
    hosted pairs must form a single n-cycle.  Search over left-out choices,
    always branching on the edge with the fewest valid choices (index
    tie-break, so deterministic), growing the pair graph as disjoint paths;
    a cycle may close only on the last edge, and the 2-regularity count
    then forces it to be Hamiltonian.
    """
    n = h.n
    edges = h.edges
    m = len(edges)

    assigned = [False] * m
    vertex_out = [False] * n
    cover = [0] * n
    # endpoint pairing of the disjoint paths in the pair graph; end[v] is
    # meaningful only while v is a path endpoint (cover 0 or 1)
    end = list(range(n))
    pair_of: list[tuple[int, int] | None] = [None] * m
    ticks = 0
    timed_out = False

    def choices(ei: int, last: bool) -> list[tuple[int, int, int]]:
        out = []
        e = edges[ei]
        for u in e:
            if vertex_out[u]:
                continue
            s, t = (x for x in e if x != u)
            if cover[s] > 1 or cover[t] > 1:
                continue
            if end[s] == t and not last:
                continue  # would close a short cycle
            out.append((u, s, t))
        return out

    def dfs(done: int) -> bool:
        nonlocal ticks, timed_out
        ticks += 1
        if ticks & 0x3FF == 0 and time.monotonic() > deadline:
            timed_out = True
            return False
        if done == m:
            return True
        last = done == m - 1
        best_ei = -1
        best: list[tuple[int, int, int]] = []
        for ei in range(m):
            if assigned[ei]:
                continue
            cand = choices(ei, last)
            if not cand:
                return False
            if best_ei < 0 or len(cand) < len(best):
                best_ei, best = ei, cand
                if len(cand) == 1:
                    break
        assigned[best_ei] = True
        for u, s, t in best:
            es, et = end[s], end[t]
            vertex_out[u] = True
            cover[s] += 1
            cover[t] += 1
            end[es], end[et] = et, es
            pair_of[best_ei] = (s, t)
            if dfs(done + 1):
                return True
            pair_of[best_ei] = None
            end[es], end[et] = s, t
            cover[s] -= 1
            cover[t] -= 1
            vertex_out[u] = False
            if timed_out:
                break
        assigned[best_ei] = False
        return False

    if not dfs(0):
        return BergeSearchResult("timeout" if timed_out else "none")

    # walk the cycle from vertex 0 to emit the witness
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for ei, pair in enumerate(pair_of):
        s, t = pair  # type: ignore[misc]
        adj[s].append((t, ei))
        adj[t].append((s, ei))
    vertices = [0]
    edge_seq = []
    prev_edge = -1
    v = 0
    for _ in range(n):
        nxt, ei = min((w, ei) for w, ei in adj[v] if ei != prev_edge)
        edge_seq.append(ei)
        if len(vertices) < n:
            vertices.append(nxt)
        v, prev_edge = nxt, ei
    return BergeSearchResult("found", vertices, edge_seq)


def find_hamilton_berge_cycle(
    h: UnionHypergraph, time_budget: float = 10.0
) -> BergeSearchResult:
    """Depth-first search for a Berge cycle through every vertex.

    The cycle needs n distinct vertices and n distinct edges.  A 3-factor
    union has exactly n edges, which routes to the left-out-bijection
    search; hypergraphs with spare edges fall back to a path-extension
    search from vertex 0 (rotation invariance makes the fixed start free).
    Both searches are deterministic; a timeout is reported as its own
    outcome, distinct from an exhausted search.
    """
    n = h.n
    m = len(h.edges)
    if m < n:
        return BergeSearchResult("none")
    if m == n:
        return _cycle_by_leftout(h, time.monotonic() + time_budget)
    edges = h.edges
    incidence = h.incidence
    unused_cnt = [len(inc) for inc in incidence]
    # unvisited vertices per edge; an unused edge with none left is dead as
    # long as the walk is not about to close (future consecutive pairs and
    # the closing pair each involve a currently unvisited vertex)
    edge_unvis = [3 - (0 in e) for e in edges]
    used = [False] * m
    visited = [False] * n
    visited[0] = True
    path = [0]
    edge_seq: list[int] = []
    deadline = time.monotonic() + time_budget
    ticks = 0
    timed_out = False

    def dfs(v: int, depth: int) -> bool:
        nonlocal ticks, timed_out
        ticks += 1
        if ticks & 0xFFF == 0 and time.monotonic() > deadline:
            timed_out = True
            return False
        if depth == n:
            for ei in incidence[v]:
                if not used[ei] and 0 in edges[ei]:
                    edge_seq.append(ei)
                    return True
            return False
        # most-constrained next vertex first; ties broken by edge then vertex
        # index, so the search stays deterministic
        children = sorted(
            (unused_cnt[w], ei, w)
            for ei in incidence[v]
            if not used[ei]
            for w in edges[ei]
            if not visited[w]
        )
        for _, ei, w in children:
            e = edges[ei]
            used[ei] = True
            ok = True
            for x in e:
                unused_cnt[x] -= 1
                if x != w and not visited[x] and unused_cnt[x] < 2:
                    ok = False
            if unused_cnt[w] < 1 or (depth + 1 < n and unused_cnt[0] < 1):
                ok = False
            visited[w] = True
            if ok and depth + 1 < n and m == n:
                for ej in incidence[w]:
                    edge_unvis[ej] -= 1
                    if edge_unvis[ej] == 0 and not used[ej]:
                        ok = False
            else:
                for ej in incidence[w]:
                    edge_unvis[ej] -= 1
            path.append(w)
            edge_seq.append(ei)
            if ok and dfs(w, depth + 1):
                return True
            edge_seq.pop()
            path.pop()
            for ej in incidence[w]:
                edge_unvis[ej] += 1
            visited[w] = False
            for x in e:
                unused_cnt[x] += 1
            used[ei] = False
            if timed_out:
                return False
        return False

    if dfs(0, 1):
        return BergeSearchResult("found", path[:], edge_seq[:])
    return BergeSearchResult("timeout" if timed_out else "none")


def validate_berge_cycle(h: UnionHypergraph, result: BergeSearchResult) -> bool:
    """Replay a witness: distinct vertices and edges, incidences hold."""
    if not result.found:
        return False
    vs, es = result.vertices, result.edge_indices
    if len(vs) != h.n or len(set(vs)) != h.n:
        return False
    if len(es) != h.n or len(set(es)) != h.n:
        return False
    for i, ei in enumerate(es):
        a = vs[i]
        b = vs[(i + 1) % h.n]
        if a not in h.edges[ei] or b not in h.edges[ei]:
            return False
    return True
