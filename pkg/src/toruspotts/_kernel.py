"""Compiled enumeration kernel.

Walks every edge subset of a torus graph with an offset union-find,
classifying each configuration by (j, n1) exactly as
``homotopy.summarize_config`` does, and accumulates integer counts indexed
by (class key, cluster count, bond count).  The counts are coupling
independent, so one enumeration serves every (Q, v) evaluation of a
homogeneous graph.

Chunked parallel reduction keeps the result deterministic: each prange
chunk owns its slice of the accumulator and the slices are summed at the
end.  Planarity violations are counted, never raised, in the kernel; the
caller turns a nonzero count into an error.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore
        def wrap(fn):
            return fn

        return wrap

    prange = range  # type: ignore


VIOL_LIFT = 0
VIOL_PRIMITIVE = 1
VIOL_MIXED_CLASS = 2
VIOL_MULTI_CROSS = 3
VIOL_CROSS_COMPANY = 4
VIOL_BOUND = 5


@njit(cache=True)
def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _find(parent, offx, offy, x):
    r = x
    dx = 0
    dy = 0
    while parent[r] != r:
        dx += offx[r]
        dy += offy[r]
        r = parent[r]
    cur = x
    cdx = dx
    cdy = dy
    while parent[cur] != cur:
        nxt = parent[cur]
        ndx = cdx - offx[cur]
        ndy = cdy - offy[cur]
        parent[cur] = r
        offx[cur] = cdx
        offy[cur] = cdy
        cur = nxt
        cdx = ndx
        cdy = ndy
    return r, dx, dy


@njit(cache=True, parallel=True)
def _count_kernel(nv, ne, eu, ev, ewx, ewy, xper, yper, lmax, n_chunks):
    nkeys = (lmax + 1) * (lmax + 1)
    counts = np.zeros((n_chunks, nkeys, nv + 1, ne + 1), dtype=np.int64)
    viols = np.zeros((n_chunks, 8), dtype=np.int64)
    total = 1 << ne
    chunk = (total + n_chunks - 1) // n_chunks
    for c in prange(n_chunks):
        parent = np.empty(nv, np.int64)
        size = np.empty(nv, np.int64)
        offx = np.empty(nv, np.int64)
        offy = np.empty(nv, np.int64)
        rank = np.empty(nv, np.int64)
        w1x = np.empty(nv, np.int64)
        w1y = np.empty(nv, np.int64)
        start = c * chunk
        stop = min(start + chunk, total)
        for subset in range(start, stop):
            for v in range(nv):
                parent[v] = v
                size[v] = 1
                offx[v] = 0
                offy[v] = 0
                rank[v] = 0
                w1x[v] = 0
                w1y[v] = 0
            bonds = 0
            n = nv
            for i in range(ne):
                if not (subset >> i) & 1:
                    continue
                bonds += 1
                ru, dux, duy = _find(parent, offx, offy, eu[i])
                rv, dvx, dvy = _find(parent, offx, offy, ev[i])
                if ru == rv:
                    cx = dux + ewx[i] - dvx
                    cy = duy + ewy[i] - dvy
                    if cx == 0 and cy == 0:
                        continue
                    if cx % xper != 0 or cy % yper != 0:
                        viols[c, VIOL_LIFT] += 1
                        continue
                    wx = cx // xper
                    wy = cy // yper
                    if wx < 0 or (wx == 0 and wy < 0):
                        wx = -wx
                        wy = -wy
                    if rank[ru] == 0:
                        g = _gcd(abs(wx), abs(wy))
                        if g != 1:
                            viols[c, VIOL_PRIMITIVE] += 1
                        rank[ru] = 1
                        w1x[ru] = wx
                        w1y[ru] = wy
                    elif rank[ru] == 1:
                        if w1x[ru] != wx or w1y[ru] != wy:
                            rank[ru] = 2
                else:
                    if size[ru] < size[rv]:
                        ox = dvx - ewx[i] - dux
                        oy = dvy - ewy[i] - duy
                        tmp = ru
                        ru = rv
                        rv = tmp
                    else:
                        ox = dux + ewx[i] - dvx
                        oy = duy + ewy[i] - dvy
                    parent[rv] = ru
                    offx[rv] = ox
                    offy[rv] = oy
                    size[ru] += size[rv]
                    n -= 1
                    if rank[rv] == 2 or rank[ru] == 2:
                        rank[ru] = 2
                    elif rank[rv] == 1:
                        if rank[ru] == 0:
                            rank[ru] = 1
                            w1x[ru] = w1x[rv]
                            w1y[ru] = w1y[rv]
                        elif w1x[ru] != w1x[rv] or w1y[ru] != w1y[rv]:
                            rank[ru] = 2
            j_h = 0
            cross = 0
            vertical = 0
            hn1 = 0
            hn2 = 0
            ok = True
            for v in range(nv):
                if parent[v] != v:
                    continue
                if rank[v] == 2:
                    cross += 1
                elif rank[v] == 1:
                    if w1x[v] >= 1:
                        if j_h == 0:
                            hn1 = w1x[v]
                            hn2 = w1y[v]
                        elif hn1 != w1x[v] or hn2 != w1y[v]:
                            viols[c, VIOL_MIXED_CLASS] += 1
                            ok = False
                        j_h += 1
                    else:
                        vertical += 1
            if cross > 1:
                viols[c, VIOL_MULTI_CROSS] += 1
                ok = False
            if cross > 0 and (j_h > 0 or vertical > 0):
                viols[c, VIOL_CROSS_COMPANY] += 1
                ok = False
            if vertical > 0 and j_h > 0:
                viols[c, VIOL_MIXED_CLASS] += 1
                ok = False
            j = j_h + cross
            if cross > 0:
                n1 = 1
            elif j_h > 0:
                n1 = hn1
            else:
                n1 = 0
            if j * n1 > lmax or j > lmax or n1 > lmax:
                viols[c, VIOL_BOUND] += 1
                ok = False
            if ok:
                counts[c, j * (lmax + 1) + n1, n, bonds] += 1
    return counts, viols


def count_classes(nv, ne, eu, ev, ewx, ewy, xper, yper, lmax, n_chunks=64):
    """Run the kernel; returns (counts[key, n, bonds], violations[8])."""
    n_chunks = max(1, min(n_chunks, 1 << ne))
    counts, viols = _count_kernel(
        np.int64(nv),
        np.int64(ne),
        np.ascontiguousarray(eu, dtype=np.int64),
        np.ascontiguousarray(ev, dtype=np.int64),
        np.ascontiguousarray(ewx, dtype=np.int64),
        np.ascontiguousarray(ewy, dtype=np.int64),
        np.int64(xper),
        np.int64(yper),
        np.int64(lmax),
        np.int64(n_chunks),
    )
    return counts.sum(axis=0), viols.sum(axis=0)
