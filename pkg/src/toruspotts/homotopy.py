"""Cluster homotopy on the torus.

For an edge subset E' of a torus graph, every cluster (connected component,
isolated vertices included) gets an integer winding lattice: lift the
cluster to the universal cover, and every independent cycle contributes a
vector (n1, n2) counting longitudinal and transverse wraps.  The lattice
has rank 0 (contractible cluster), rank 1 (the cluster winds along a single
primitive direction), or rank 2 (cross topology: the cluster wraps both
ways).

Planarity forces strong structure which is checked, never assumed: all
non-trivial clusters of one configuration share a single winding class, and
a cross cluster tolerates no other non-trivial cluster.  A cross cluster
counts as one horizontally-percolating cluster with n1 = 1, which is what
makes the cross-topology (Q - 1) term of the amplitude formulas come out of
plain enumeration.

``find_clusters`` is the readable reference (breadth-first lift plus
Hermite reduction); ``summarize_config`` computes the same class data with
an offset union-find in a single pass, fast enough for full enumerations.
The two are cross-checked against each other in the test suite.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import HomotopyViolation, InternalCheckError
from .lattice import TorusGraph


@dataclass(frozen=True)
class ClusterInfo:
    """One cluster: its vertices and a basis of its winding lattice.

    Basis vectors are in winding units (full wraps), rank 0..2; a rank-1
    basis vector is primitive and sign-normalized (n1 > 0, or n1 = 0 and
    n2 > 0).
    """

    vertices: tuple[int, ...]
    basis: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class HomotopyClass:
    tag: str  # "trivial" | "wind" | "cross"
    n1: int = 0
    n2: int = 0

    @staticmethod
    def trivial() -> "HomotopyClass":
        return HomotopyClass("trivial")

    @staticmethod
    def wind(n1: int, n2: int) -> "HomotopyClass":
        return HomotopyClass("wind", n1, n2)

    @staticmethod
    def cross() -> "HomotopyClass":
        return HomotopyClass("cross")


@dataclass(frozen=True)
class ConfigSummary:
    """Topological digest of one edge subset."""

    bonds: int
    n_clusters: int
    j: int  # clusters percolating longitudinally (cross counts once)
    n1: int  # shared longitudinal winding of those clusters, 0 if j = 0


def _normalize(v: tuple[int, int]) -> tuple[int, int]:
    n1, n2 = v
    if n1 < 0 or (n1 == 0 and n2 < 0):
        return (-n1, -n2)
    return (n1, n2)


def _winding_units(g: TorusGraph, cx: int, cy: int) -> tuple[int, int]:
    if cx % g.N or cy % g.L:
        raise InternalCheckError(
            f"cycle displacement ({cx},{cy}) not a multiple of the periods"
        )
    return (cx // g.N, cy // g.L)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hermite_basis(vectors: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Basis of the integer lattice spanned by 2-vectors, Hermite style.

    Rank 1 returns the sign-normalized generator; rank 2 returns the
    lower-triangular form ((d1, b), (0, d2)) with d1, d2 > 0 and
    0 <= b < d2.
    """
    vs = [v for v in vectors if v != (0, 0)]
    if not vs:
        return ()
    colinear = all(vs[0][0] * v[1] - vs[0][1] * v[0] == 0 for v in vs[1:])
    if colinear:
        g0 = math.gcd(abs(vs[0][0]), abs(vs[0][1]))
        ux, uy = vs[0][0] // g0, vs[0][1] // g0
        scales = [v[0] // ux if ux else v[1] // uy for v in vs]
        t = math.gcd(*(abs(s) for s in scales))
        return (_normalize((t * ux, t * uy)),)
    r: tuple[int, int] = (0, 0)
    for v in vs:
        g, s, t = _ext_gcd(r[0], v[0])
        r = (g, s * r[1] + t * v[1])
    d1 = r[0]
    d2 = 0
    for v in vs:
        d2 = math.gcd(d2, abs(v[1] - (v[0] // d1) * r[1]))
    return ((d1, r[1] % d2), (0, d2))


def find_clusters(
    g: TorusGraph,
    subset: int,
    root_order: Sequence[int] | None = None,
) -> list[ClusterInfo]:
    """Clusters of the edge subset (given as a bitmask over g.edges).

    Builds a breadth-first spanning forest assigning each vertex a lift
    position in the universal cover; every non-tree edge then contributes
    the winding vector of its fundamental cycle, and the vectors of each
    cluster are Hermite-reduced to a basis.  ``root_order`` changes the
    vertex order used to seed the forest (the classification must not
    depend on it, which the tests exercise).
    """
    nv = g.n_vertices
    adj: list[list[tuple[int, int, int, int]]] = [[] for _ in range(nv)]
    for idx, e in enumerate(g.edges):
        if subset >> idx & 1:
            adj[e.u].append((e.v, e.dx, e.dy, idx))
            adj[e.v].append((e.u, -e.dx, -e.dy, idx))

    order = range(nv) if root_order is None else root_order
    comp = [-1] * nv
    posx = [0] * nv
    posy = [0] * nv
    members: list[list[int]] = []
    vectors: list[list[tuple[int, int]]] = []
    tree_edges: set[int] = set()

    for start in order:
        if comp[start] != -1:
            continue
        cid = len(members)
        members.append([start])
        vectors.append([])
        comp[start] = cid
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v, dx, dy, idx in adj[u]:
                if comp[v] == -1:
                    comp[v] = cid
                    posx[v] = posx[u] + dx
                    posy[v] = posy[u] + dy
                    members[cid].append(v)
                    tree_edges.add(idx)
                    queue.append(v)

    for idx, e in enumerate(g.edges):
        if subset >> idx & 1 and idx not in tree_edges:
            cid = comp[e.u]
            cx = posx[e.u] + e.dx - posx[e.v]
            cy = posy[e.u] + e.dy - posy[e.v]
            w = _winding_units(g, cx, cy)
            if w != (0, 0):
                vectors[cid].append(w)

    return [
        ClusterInfo(tuple(sorted(ms)), hermite_basis(vs))
        for ms, vs in zip(members, vectors)
    ]


def classify_cluster(c: ClusterInfo) -> HomotopyClass:
    """Homotopy class from the winding basis rank."""
    if len(c.basis) == 0:
        return HomotopyClass.trivial()
    if len(c.basis) == 1:
        n1, n2 = c.basis[0]
        if math.gcd(abs(n1), abs(n2)) != 1:
            raise InternalCheckError(
                f"rank-1 winding vector ({n1},{n2}) is not primitive"
            )
        return HomotopyClass.wind(n1, n2)
    return HomotopyClass.cross()


def _find(parent: list[int], ox: list[int], oy: list[int], x: int):
    """Union-find lookup carrying lift offsets, with path compression.

    Offsets satisfy pos(x) = pos(parent(x)) + off(x); the returned (dx, dy)
    is pos(x) - pos(root).
    """
    r = x
    dx = dy = 0
    while parent[r] != r:
        dx += ox[r]
        dy += oy[r]
        r = parent[r]
    cur = x
    cdx, cdy = dx, dy
    while parent[cur] != cur:
        nxt = parent[cur]
        ndx, ndy = cdx - ox[cur], cdy - oy[cur]
        parent[cur] = r
        ox[cur], oy[cur] = cdx, cdy
        cur = nxt
        cdx, cdy = ndx, ndy
    return r, dx, dy


def summarize_config(g: TorusGraph, subset: int) -> ConfigSummary:
    """Single-pass topological digest of one edge subset.

    Same classification as find_clusters + classify_cluster, computed with
    an offset union-find so full enumerations stay cheap.  Raises
    HomotopyViolation if the configuration breaks a planarity invariant
    (mixed winding classes, a cross cluster with company, or more than one
    cross cluster), which would signal a bug in the lift.
    """
    nv = g.n_vertices
    parent = list(range(nv))
    size = [1] * nv
    ox = [0] * nv
    oy = [0] * nv
    rank = [0] * nv
    w1: list[tuple[int, int]] = [(0, 0)] * nv
    bonds = 0
    n = nv

    for idx, e in enumerate(g.edges):
        if not subset >> idx & 1:
            continue
        bonds += 1
        ru, dux, duy = _find(parent, ox, oy, e.u)
        rv, dvx, dvy = _find(parent, ox, oy, e.v)
        if ru == rv:
            w = _winding_units(g, dux + e.dx - dvx, duy + e.dy - dvy)
            if w == (0, 0):
                continue
            w = _normalize(w)
            if rank[ru] == 0:
                if math.gcd(abs(w[0]), abs(w[1])) != 1:
                    raise InternalCheckError(
                        f"cycle winding vector {w} is not primitive"
                    )
                rank[ru] = 1
                w1[ru] = w
            elif rank[ru] == 1 and w1[ru] != w:
                rank[ru] = 2
        else:
            if size[ru] < size[rv]:
                # attach u's root under v's root
                offx = dvx - e.dx - dux
                offy = dvy - e.dy - duy
                ru, rv = rv, ru
            else:
                offx = dux + e.dx - dvx
                offy = duy + e.dy - dvy
            parent[rv] = ru
            ox[rv], oy[rv] = offx, offy
            size[ru] += size[rv]
            n -= 1
            if rank[rv] == 2 or rank[ru] == 2:
                rank[ru] = 2
            elif rank[rv] == 1:
                if rank[ru] == 0:
                    rank[ru] = 1
                    w1[ru] = w1[rv]
                elif w1[ru] != w1[rv]:
                    rank[ru] = 2

    j_horizontal = 0
    cross = 0
    vertical = 0
    shared: tuple[int, int] | None = None
    for v in range(nv):
        if parent[v] != v:
            continue
        if rank[v] == 2:
            cross += 1
        elif rank[v] == 1:
            if w1[v][0] >= 1:
                if shared is None:
                    shared = w1[v]
                elif shared != w1[v]:
                    raise HomotopyViolation(
                        f"mixed winding classes {shared} and {w1[v]}"
                    )
                j_horizontal += 1
            else:
                vertical += 1

    if cross > 1:
        raise HomotopyViolation("more than one cross cluster")
    if cross and (j_horizontal or vertical):
        raise HomotopyViolation("cross cluster coexists with another NTC")
    if vertical and j_horizontal:
        raise HomotopyViolation("vertical and horizontal NTC coexist")

    j = j_horizontal + cross
    n1 = shared[0] if shared is not None else (1 if cross else 0)
    if j * n1 > g.L:
        raise HomotopyViolation(f"j*n1 = {j * n1} exceeds the width {g.L}")
    return ConfigSummary(bonds=bonds, n_clusters=n, j=j, n1=n1)
