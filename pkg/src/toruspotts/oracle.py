"""Brute-force enumeration oracle.

Everything here is defined directly on the cluster expansion: an edge
subset E' weighs Q**n(E') times the product of its edge couplings, n
counting all connected components (isolated vertices included).  The
oracle enumerates all 2**|E| subsets, splits the partition function by the
topological class (j, n1) of each configuration, and derives the level and
class characters from the split by the closed-form compatibility
coefficients.  These values are the reference that the transfer-matrix
route must reproduce exactly.

Homogeneous graphs enumerate through a compiled kernel whose per-subset
classification mirrors ``homotopy.summarize_config`` (the two are
cross-checked in the tests); the resulting integer counts are coupling
independent and cached per topology.  Edge-dependent couplings take the
pure Python path, which is fine at the sizes where they are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernel
from .errors import EnumerationGuard, HomotopyViolation
from .exact import PolyQ, RatLike, as_rat
from .homotopy import summarize_config
from .lattice import TorusGraph
from .numtheory import (
    annulus_state_count,
    cycle_class_weight,
    cycle_class_weight_term,
    level_amplitude_sum,
    level_amplitude_term,
)

ENUM_GUARD = 30
_PYTHON_LIMIT = 14

_VIOL_NAMES = {
    _kernel.VIOL_LIFT: "winding lift broke periodicity",
    _kernel.VIOL_PRIMITIVE: "non-primitive cycle vector",
    _kernel.VIOL_MIXED_CLASS: "mixed winding classes",
    _kernel.VIOL_MULTI_CROSS: "more than one cross cluster",
    _kernel.VIOL_CROSS_COMPANY: "cross cluster with company",
    _kernel.VIOL_BOUND: "class bound j*n1 <= L violated",
}


def _check_guard(g: TorusGraph) -> None:
    if g.n_edges > ENUM_GUARD:
        raise EnumerationGuard(
            f"{g.n_edges} edges means 2^{g.n_edges} subsets; "
            f"the enumeration guard is 2^{ENUM_GUARD}"
        )


# ---------------------------------------------------------------------------
# enumeration engines


def class_counts_python(g: TorusGraph) -> dict:
    """Reference engine: counts[(j, n1)][(n, bonds)] over all subsets."""
    _check_guard(g)
    out: dict[tuple[int, int], dict[tuple[int, int], int]] = {}
    for subset in range(1 << g.n_edges):
        s = summarize_config(g, subset)
        inner = out.setdefault((s.j, s.n1), {})
        key = (s.n_clusters, s.bonds)
        inner[key] = inner.get(key, 0) + 1
    return out


def class_counts_kernel(g: TorusGraph) -> dict:
    """Compiled engine; same output format as class_counts_python."""
    _check_guard(g)
    eu = np.array([e.u for e in g.edges], dtype=np.int64)
    ev = np.array([e.v for e in g.edges], dtype=np.int64)
    ewx = np.array([e.dx for e in g.edges], dtype=np.int64)
    ewy = np.array([e.dy for e in g.edges], dtype=np.int64)
    counts, viols = _kernel.count_classes(
        g.n_vertices, g.n_edges, eu, ev, ewx, ewy, g.N, g.L, g.L
    )
    for code, name in _VIOL_NAMES.items():
        if viols[code]:
            raise HomotopyViolation(f"{viols[code]} configurations: {name}")
    out: dict[tuple[int, int], dict[tuple[int, int], int]] = {}
    lmax = g.L
    nkeys, nn, nb = counts.shape
    for keycode in range(nkeys):
        block = counts[keycode]
        if not block.any():
            continue
        j, n1 = divmod(keycode, lmax + 1)
        inner: dict[tuple[int, int], int] = {}
        for n in range(nn):
            for b in range(nb):
                c = int(block[n, b])
                if c:
                    inner[(n, b)] = c
        out[(j, n1)] = inner
    return out


_TOPOLOGY_COUNTS: dict[tuple, dict] = {}


def class_counts(g: TorusGraph, engine: str = "auto") -> dict:
    """Topology-level subset counts, cached per (kind, L, N)."""
    if engine == "python":
        return class_counts_python(g)
    if engine == "kernel":
        return class_counts_kernel(g)
    key = g.topology_key()
    if key not in _TOPOLOGY_COUNTS:
        if g.n_edges <= _PYTHON_LIMIT or not _kernel.HAVE_NUMBA:
            _TOPOLOGY_COUNTS[key] = class_counts_python(g)
        else:
            _TOPOLOGY_COUNTS[key] = class_counts_kernel(g)
    return _TOPOLOGY_COUNTS[key]


@lru_cache(maxsize=None)
def _weighted_aggregate(g: TorusGraph) -> dict:
    """weights[(j, n1)][n] = sum over subsets of the coupling product."""
    _check_guard(g)
    couplings = [e.coupling for e in g.edges]
    out: dict[tuple[int, int], dict[int, Fraction]] = {}
    for subset in range(1 << g.n_edges):
        s = summarize_config(g, subset)
        w = Fraction(1)
        m = subset
        i = 0
        while m:
            if m & 1:
                w *= couplings[i]
            m >>= 1
            i += 1
        inner = out.setdefault((s.j, s.n1), {})
        inner[s.n_clusters] = inner.get(s.n_clusters, Fraction(0)) + w
    return out


def _coupling_powers(v: Fraction, top: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(top):
        out.append(out[-1] * v)
    return out


def cluster_weights_by_class(g: TorusGraph) -> dict:
    """weights[(j, n1)][n] = coupling-weighted subset count, exact."""
    if g.is_homogeneous():
        counts = class_counts(g)
        vpow = _coupling_powers(g.homogeneous_coupling, g.n_edges)
        out: dict[tuple[int, int], dict[int, Fraction]] = {}
        for cls, inner in counts.items():
            byn: dict[int, Fraction] = {}
            for (n, b), c in inner.items():
                byn[n] = byn.get(n, Fraction(0)) + c * vpow[b]
            out[cls] = byn
        return out
    return _weighted_aggregate(g)


# ---------------------------------------------------------------------------
# partition functions


def partition_function(g: TorusGraph, q: RatLike | None = None):
    """Exact cluster-expansion sum over all edge subsets.

    ``q=None`` returns the polynomial in Q at the graph's fixed couplings;
    a rational q returns the exact number.  Computed directly from the
    per-class weights (which themselves come from plain enumeration).
    """
    weights = cluster_weights_by_class(g)
    byn: dict[int, Fraction] = {}
    for inner in weights.values():
        for n, w in inner.items():
            byn[n] = byn.get(n, Fraction(0)) + w
    return _assemble(byn, q)


def partition_function_plain(g: TorusGraph, q: RatLike | None = None):
    """Independent slow path: no homotopy, just union-find cluster counts.

    Used to validate that the class-resolved table really sums to the
    partition function.
    """
    _check_guard(g)
    if g.n_edges > 2 * _PYTHON_LIMIT:
        raise EnumerationGuard("plain python path limited to small graphs")
    couplings = [e.coupling for e in g.edges]
    byn: dict[int, Fraction] = {}
    nv = g.n_vertices
    for subset in range(1 << g.n_edges):
        parent = list(range(nv))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        w = Fraction(1)
        n = nv
        for i, e in enumerate(g.edges):
            if subset >> i & 1:
                w *= couplings[i]
                ru, rv = find(e.u), find(e.v)
                if ru != rv:
                    parent[ru] = rv
                    n -= 1
        byn[n] = byn.get(n, Fraction(0)) + w
    return _assemble(byn, q)


def _assemble(byn: dict[int, Fraction], q: RatLike | None):
    if q is None:
        top = max(byn) if byn else 0
        return PolyQ.of([byn.get(n, Fraction(0)) for n in range(top + 1)])
    qv = as_rat(q)
    acc = Fraction(0)
    for n, w in byn.items():
        acc += w * qv**n
    return acc


# ---------------------------------------------------------------------------
# the restricted table and its characters


@dataclass
class RestrictedZTable:
    """Partition function split by topological class.

    ``classes[(j, n1)]`` is the restricted sum over configurations with j
    longitudinally percolating clusters of shared winding n1; the key
    (0, 0) holds everything else (no such cluster, including configurations
    whose only non-trivial clusters wind purely transversally).  Values are
    exact rationals at fixed q, or polynomials in Q when q is None.
    """

    graph: TorusGraph
    q: Fraction | None
    classes: dict[tuple[int, int], object]

    @property
    def z(self):
        acc = None
        for v in self.classes.values():
            acc = v if acc is None else acc + v
        return acc

    def get(self, j: int, n1: int):
        return self.classes.get((j, n1), self._zero())

    def z_j1(self, j: int):
        """Z restricted to j clusters of winding 1; j = 0 is the (0,0) cell."""
        if j == 0:
            return self.get(0, 0)
        return self.get(j, 1)

    def z_multi(self, j: int):
        """Z restricted to j clusters of winding n1 >= 2."""
        acc = self._zero()
        for (jj, n1), v in self.classes.items():
            if jj == j and n1 >= 2:
                acc = acc + v
        return acc

    def z_level(self, j: int):
        """Z restricted to j longitudinally percolating clusters."""
        if j == 0:
            return self.get(0, 0)
        acc = self._zero()
        for (jj, _n1), v in self.classes.items():
            if jj == j:
                acc = acc + v
        return acc

    def _zero(self):
        return PolyQ.zero() if self.q is None else Fraction(0)

    def to_json(self) -> dict:
        def enc(v):
            from .exact import rat_str

            return v.to_json() if isinstance(v, PolyQ) else rat_str(v)

        return {
            "graph": self.graph.to_json(),
            "q": None if self.q is None else f"{self.q}",
            "classes": {
                f"{j},{n1}": enc(v) for (j, n1), v in sorted(self.classes.items())
            },
            "z": enc(self.z),
        }


def restricted_z_table(g: TorusGraph, q: RatLike | None = None) -> RestrictedZTable:
    weights = cluster_weights_by_class(g)
    qv = None if q is None else as_rat(q)
    classes = {
        cls: _assemble(byn, qv) for cls, byn in sorted(weights.items())
    }
    return RestrictedZTable(graph=g, q=qv, classes=classes)


@dataclass
class OracleCharacters:
    """Level and class characters derived from a restricted table."""

    levels: list  # index l = 0..L
    per_class: dict[tuple[int, int], object]  # (d, n1) with n1 >= 2
    aggregated: dict[int, object]  # d -> sum over n1 >= 2

    def level(self, l: int):
        return self.levels[l]


def _div_qpow(value, q: Fraction | None, j: int):
    if j == 0:
        return value
    if q is None:
        return value.shift_down(j)
    if q == 0:
        raise ValueError("q = 0 is a degenerate evaluation point")
    return value / q**j


def characters_from_table(t: RestrictedZTable) -> OracleCharacters:
    """Level and class characters from the restricted table.

    The level character at l >= 2 is the compatibility-weighted sum of the
    winding-1 cells; levels 1 and 0 pick up the multi-winding corrections
    with half and full central binomial coefficients.  The class character
    for d cycles of winding n1 >= 2 uses the shifted binomial C(2j, j-d).
    """
    g, q = t.graph, t.q
    L = g.L
    zero = PolyQ.zero() if q is None else Fraction(0)

    levels = []
    for l in range(L + 1):
        acc = zero
        if l >= 2:
            for j in range(l, L + 1):
                w = l * annulus_state_count(j, l)
                acc = acc + _div_qpow(t.z_j1(j), q, j) * w
        elif l == 1:
            for j in range(1, L + 1):
                acc = acc + _div_qpow(t.z_j1(j), q, j) * annulus_state_count(j, 1)
            for j in range(1, L // 2 + 1):
                w = Fraction(math.comb(2 * j, j), 2)
                acc = acc + _div_qpow(t.z_multi(j), q, j) * w
        else:
            for j in range(0, L + 1):
                acc = acc + _div_qpow(t.z_j1(j), q, j) * annulus_state_count(j, 0)
            for j in range(1, L // 2 + 1):
                acc = acc + _div_qpow(t.z_multi(j), q, j) * math.comb(2 * j, j)
        levels.append(acc)

    per_class: dict[tuple[int, int], object] = {}
    aggregated: dict[int, object] = {}
    for n1 in range(2, L + 1):
        top = L // n1
        for d in range(1, top + 1):
            acc = zero
            for j in range(d, top + 1):
                w = math.comb(2 * j, j - d)
                acc = acc + _div_qpow(t.get(j, n1), q, j) * w
            per_class[(d, n1)] = acc
    for d in range(1, L // 2 + 1):
        acc = zero
        for (dd, _n1), v in per_class.items():
            if dd == d:
                acc = acc + v
        aggregated[d] = acc
    return OracleCharacters(levels=levels, per_class=per_class, aggregated=aggregated)


# ---------------------------------------------------------------------------
# reconstructions (the decomposition identities, checked exactly)


@dataclass
class ReconstructionReport:
    """Exact residuals of every decomposition identity on one table."""

    items: list = field(default_factory=list)  # (check id, label, residual)

    def add(self, check: str, label: str, residual) -> None:
        self.items.append((check, label, residual))

    @property
    def all_zero(self) -> bool:
        return all(_is_zero(r) for _, _, r in self.items)

    def failures(self) -> list:
        return [it for it in self.items if not _is_zero(it[2])]


def _is_zero(value) -> bool:
    if isinstance(value, PolyQ):
        return value.is_zero()
    return value == 0


def _lucas_coeff(d: int, j: int) -> int:
    """(2d/(d+j)) * C(d+j, d-j) as an integer."""
    out = math.comb(d + j, d - j)
    if d - j >= 1:
        out += math.comb(d + j - 1, d - j - 1)
    return out


def _qpow(q: Fraction | None, j: int):
    if q is None:
        return PolyQ.monomial(1, j)
    return q**j


def _coef(poly: PolyQ, q: Fraction | None):
    return poly if q is None else poly.eval(q)


def reconstruction_residuals(
    t: RestrictedZTable, c: OracleCharacters
) -> ReconstructionReport:
    """Rebuild every restricted sum from the characters and subtract.

    All residuals must vanish identically; they are reported, not raised,
    so a verification run can show the full picture.
    """
    g, q = t.graph, t.q
    L = g.L
    zero = PolyQ.zero() if q is None else Fraction(0)
    rep = ReconstructionReport()

    half = L // 2
    rec_multi: dict[int, object] = {}
    for j in range(1, half + 1):
        acc = zero
        for d in range(j, half + 1):
            term = c.aggregated[d] * _lucas_coeff(d, j)
            acc = acc + (term if (d - j) % 2 == 0 else -term)
        rec_multi[j] = acc * _qpow(q, j)
        rep.add(
            "multi-winding-reconstruction",
            f"j={j}",
            rec_multi[j] - t.z_multi(j),
        )

    for d in range(1, half + 1):
        acc = zero
        for j in range(d, half + 1):
            acc = acc + _div_qpow(rec_multi[j], q, j) * math.comb(2 * j, j - d)
        rep.add("class-inversion-roundtrip", f"d={d}", acc - c.aggregated[d])

    for j in range(2, L + 1):
        acc = zero
        for l in range(j, L + 1):
            w = _coef(level_amplitude_term(l, j), q) * Fraction(1, l)
            acc = acc + c.level(l) * w
        rep.add("winding1-reconstruction", f"j={j}", acc - t.z_j1(j))

    acc = zero
    for l in range(1, L + 1):
        acc = acc + c.level(l) * (_coef(level_amplitude_term(l, 1), q) * Fraction(1, l))
    for d in range(1, half + 1):
        term = c.aggregated[d] * _qpow(q, 1)
        acc = acc + (term if d % 2 == 0 else -term)
    rep.add("winding1-reconstruction", "j=1", acc - t.z_j1(1))

    acc = zero
    for l in range(0, L + 1):
        w = _coef(level_amplitude_term(l, 0), q) * Fraction(1, max(l, 1))
        acc = acc + c.level(l) * w
    for d in range(1, half + 1):
        acc = acc + (c.aggregated[d] if d % 2 == 0 else -c.aggregated[d])
    rep.add("winding1-reconstruction", "j=0", acc - t.z_j1(0))

    for j in range(0, L + 1):
        acc = zero
        for l in range(j, L + 1):
            w = _coef(level_amplitude_term(l, j), q) * Fraction(1, max(l, 1))
            acc = acc + c.level(l) * w
        for d in range(max(j, 1), half + 1):
            acc = acc + c.aggregated[d] * _coef(cycle_class_weight_term(d, j), q)
        rep.add("sector-count-reconstruction", f"j={j}", acc - t.z_level(j))

    acc = zero
    for l in range(0, L + 1):
        w = _coef(level_amplitude_sum(l), q) * Fraction(1, max(l, 1))
        acc = acc + c.level(l) * w
    for d in range(1, half + 1):
        acc = acc + c.aggregated[d] * _coef(cycle_class_weight(d), q)
    rep.add("full-reconstruction", "Z", acc - t.z)

    return rep
