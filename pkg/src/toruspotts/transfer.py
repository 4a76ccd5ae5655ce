"""Level-l transfer operators on labeled connectivity states.

One row advances the system a single column in the longitudinal direction.
Working over 2L points (old column 0..L-1, new column L..2L-1) the row is a
product of elementary bond factors:

* each longitudinal bond contributes (1 + v * join(old y, new y)), so the
  "bond absent" branch leaves the new point fresh and the "bond present"
  branch carries the old point's block forward with weight v;
* the triangular lattice inserts diagonal factors (1 + v * join(old y,
  new y+1)) before the old points retire;
* retiring an old point drops it from its block, multiplying by Q when an
  unmarked block thereby dies and annihilating the term when a marked block
  would die (a bridge death changes the level, which the diagonal block
  excludes);
* joining two distinct marked blocks likewise annihilates that branch;
* finally each transverse bond of the new column contributes
  (1 + v * join).

Everything is generic over the weight ring: exact rationals for fixed Q,
polynomials for symbolic Q, floats for the numeric spectral path.  Traces
are taken over the standard (canonically labeled) basis; the twisted trace
reads off the coefficient of a cyclically relabeled copy of the input
state, which is how cluster configurations that permute the bridges are
separated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import InternalCheckError
from .exact import ComplexF, PolyQ, RatLike, as_rat
from .lattice import TorusGraph
from .numtheory import (
    annulus_state_count,
    class_character_sum,
    class_members,
    divisors,
)
from .states import (
    ConnState,
    apply_mark_shift,
    canonical_labels,
    enumerate_states,
    labeled_states,
)

# A working state: blocks as (sorted point tuple, label) sorted by least
# point; label 0 means unmarked.
Key = tuple[tuple[tuple[int, ...], int], ...]


def state_key(s: ConnState) -> Key:
    labels = dict(zip(s.marked, s.labels)) if s.labels else {}
    return tuple((b, labels.get(i, 0)) for i, b in enumerate(s.blocks))


def _canon(blocks: Sequence[tuple[tuple[int, ...], int]]) -> Key:
    return tuple(sorted(blocks, key=lambda b: b[0][0]))


def _join(key: Key, p: int, r: int) -> Optional[Key]:
    """Merge the blocks holding p and r; None when both are marked."""
    ip = ir = -1
    for i, (pts, _) in enumerate(key):
        if p in pts:
            ip = i
        if r in pts:
            ir = i
    if ip == ir:
        return key
    (pts_a, lab_a), (pts_b, lab_b) = key[ip], key[ir]
    if lab_a and lab_b:
        return None
    merged = (tuple(sorted(pts_a + pts_b)), lab_a or lab_b)
    rest = [blk for i, blk in enumerate(key) if i not in (ip, ir)]
    rest.append(merged)
    return _canon(rest)


def _retire(key: Key, p: int) -> Optional[tuple[Key, bool]]:
    """Drop point p; (new key, block_died).  None when a marked block dies."""
    for i, (pts, lab) in enumerate(key):
        if p in pts:
            remaining = tuple(q for q in pts if q != p)
            if not remaining:
                if lab:
                    return None
                return _canon(key[:i] + key[i + 1 :]), True
            out = list(key)
            out[i] = (remaining, lab)
            return _canon(out), False
    raise InternalCheckError(f"point {p} missing from state")


def shift_key(key: Key, a: int) -> Key:
    """Cyclically shift the labels of a working state's marked blocks."""
    marked = [i for i, (_, lab) in enumerate(key) if lab]
    l = len(marked)
    if l == 0:
        return key
    out = list(key)
    labels = [key[i][1] for i in marked]
    for pos, i in enumerate(marked):
        out[i] = (key[i][0], labels[(pos - a) % l])
    return tuple(out)


@dataclass(frozen=True)
class RowCouplings:
    """Bond couplings for one transfer step, already lifted to the ring."""

    L: int
    longitudinal: tuple
    diagonal: tuple | None
    transverse: tuple  # of (row a, row b, coupling)


class RowOperator:
    """Sparse action of one transfer row at fixed level l.

    Applications conserve the level exactly: branches in which a marked
    block would die or two marked blocks would merge are dropped.  The
    action commutes with cyclic relabeling of the marked blocks.
    """

    def __init__(self, row: RowCouplings, l: int, q, one) -> None:
        self.row = row
        self.l = l
        self.q = q
        self.one = one
        self._memo: dict[Key, dict[Key, object]] = {}

    def apply_key(self, key: Key) -> dict[Key, object]:
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        L = self.row.L
        spawned = _canon(list(key) + [((L + y,), 0) for y in range(L)])
        terms: dict[Key, object] = {spawned: self.one}
        for y in range(L):
            terms = self._bond_factor(terms, y, L + y, self.row.longitudinal[y])
        if self.row.diagonal is not None:
            for y in range(L):
                terms = self._bond_factor(
                    terms, y, L + (y + 1) % L, self.row.diagonal[y]
                )
        for y in range(L):
            nxt: dict[Key, object] = {}
            for k, w in terms.items():
                res = _retire(k, y)
                if res is None:
                    continue
                k2, died = res
                _acc(nxt, k2, w * self.q if died else w)
            terms = nxt
        for a, b, v in self.row.transverse:
            terms = self._bond_factor(terms, L + a, L + b, v)
        out: dict[Key, object] = {}
        for k, w in terms.items():
            renumbered = _canon(
                [(tuple(p - L for p in pts), lab) for pts, lab in k]
            )
            _acc(out, renumbered, w)
        self._memo[key] = out
        return out

    def _bond_factor(self, terms: dict, p: int, r: int, v) -> dict:
        nxt: dict[Key, object] = {}
        for k, w in terms.items():
            _acc(nxt, k, w)
            k2 = _join(k, p, r)
            if k2 is not None:
                _acc(nxt, k2, w * v)
        return nxt

    def apply_vec(self, vec: dict) -> dict:
        out: dict[Key, object] = {}
        for k, w in vec.items():
            for k2, w2 in self.apply_key(k).items():
                _acc(out, k2, w * w2)
        return out


def _acc(d: dict, k, w) -> None:
    if k in d:
        d[k] = d[k] + w
    else:
        d[k] = w


def build_row_operator(row: RowCouplings, l: int, q, one=None) -> RowOperator:
    if one is None:
        one = Fraction(1)
    return RowOperator(row, l, q, one)


# ---------------------------------------------------------------------------
# from graph to per-column operators


def _ring(q):
    """(q value, coupling lift, one) for the three weight rings."""
    if q is None:
        return PolyQ.q(), PolyQ.constant, PolyQ.one()
    if isinstance(q, float):
        return q, float, 1.0
    return as_rat(q), (lambda f: f), Fraction(1)


def column_rows(g: TorusGraph, q) -> list[RowCouplings]:
    """Per-column bond data: step t carries the longitudinal and diagonal
    bonds leaving column t and the transverse bonds of column t + 1."""
    qv, conv, _one = _ring(q)
    L, N = g.L, g.N
    longitudinal = [[None] * L for _ in range(N)]
    diagonal = [[None] * L for _ in range(N)]
    transverse: list[list[tuple[int, int, object]]] = [[] for _ in range(N)]
    has_diag = False
    for e in g.edges:
        x, y = divmod(e.u, L)
        if (e.dx, e.dy) == (1, 0):
            longitudinal[x][y] = conv(e.coupling)
        elif (e.dx, e.dy) == (1, 1):
            diagonal[x][y] = conv(e.coupling)
            has_diag = True
        elif (e.dx, e.dy) == (0, 1):
            transverse[x].append((y, (y + 1) % L, conv(e.coupling)))
        else:
            raise InternalCheckError(f"unexpected edge displacement {(e.dx, e.dy)}")
    rows = []
    for t in range(N):
        rows.append(
            RowCouplings(
                L=L,
                longitudinal=tuple(longitudinal[t]),
                diagonal=tuple(diagonal[t]) if has_diag else None,
                transverse=tuple(transverse[(t + 1) % N]),
            )
        )
    return rows


def _standard_basis(L: int, l: int) -> tuple[ConnState, ...]:
    if l == 0:
        return enumerate_states(L, 0)
    return tuple(canonical_labels(s) for s in enumerate_states(L, l))


@lru_cache(maxsize=None)
def _twisted_traces_all(g: TorusGraph, l: int, q) -> dict[int, object]:
    """Twisted traces for every shift exponent a in 1..l (or {0} at l=0).

    For each standard basis state the N-row image is computed once; the
    trace for shift a reads off the coefficient of the a-shifted copy of
    the input state.
    """
    qv, conv, one = _ring(q)
    rows = [
        build_row_operator(rc, l, qv, one) for rc in column_rows(g, q)
    ]
    basis = _standard_basis(g.L, l)
    shifts = list(range(1, l + 1)) if l else [0]
    totals: dict[int, object] = {a: None for a in shifts}
    for s in basis:
        key = state_key(s)
        vec: dict[Key, object] = {key: one}
        for op in rows:
            vec = op.apply_vec(vec)
        for a in shifts:
            target = shift_key(key, a) if l else key
            coeff = vec.get(target)
            if coeff is None:
                continue
            totals[a] = coeff if totals[a] is None else totals[a] + coeff
    zero = qv * 0
    return {a: (zero if t is None else t) for a, t in totals.items()}


def twisted_trace(g: TorusGraph, l: int, shift: int | None = None, q=None):
    """Trace of the N-row product twisted by the cyclic label shift E**a.

    ``shift=None`` (or l, or 0 at level 0) is the plain identity-twisted
    trace, which equals the level trace divided by l.
    """
    if not 0 <= l <= g.L:
        raise ValueError(f"level {l} outside 0..{g.L}")
    if l == 0:
        return _twisted_traces_all(g, 0, _q_key(q))[0]
    a = l if shift is None else shift
    if not 1 <= a <= l:
        raise ValueError(f"shift exponent {a} outside 1..{l}")
    return _twisted_traces_all(g, l, _q_key(q))[a]


def _q_key(q):
    if q is None:
        return None
    return as_rat(q)


def level_trace(g: TorusGraph, l: int, q=None):
    """The level character: l times the identity-twisted trace (the plain
    trace of the level-l block over the full labeled space)."""
    t = twisted_trace(g, l, None, q)
    return t * l if l >= 1 else t


def class_trace(g: TorusGraph, l: int, d: int, q=None):
    """Sum of twisted traces over the class with d cycles of length l/d."""
    acc = None
    for a in class_members(l, d):
        t = twisted_trace(g, l, a, q)
        acc = t if acc is None else acc + t
    return acc


def irrep_trace(g: TorusGraph, l: int, k: int | None = None, q=None):
    """Character of irrep D_k: sum of chi_k-weighted twisted traces.

    Exact: the character sums over each class are integers, and the twisted
    traces are constant on classes (asserted here).
    """
    if l == 0:
        return twisted_trace(g, 0, None, q)
    if k is None or not 1 <= k <= l:
        raise ValueError(f"irrep index {k} outside 1..{l}")
    traces = _twisted_traces_all(g, l, _q_key(q))
    acc = None
    for d in divisors(l):
        members = class_members(l, d)
        rep = traces[members[0]]
        for a in members[1:]:
            if traces[a] != rep:
                raise InternalCheckError(
                    f"twisted traces differ inside class (d={d}) at level {l}"
                )
        term = rep * class_character_sum(l, d, k)
        acc = term if acc is None else acc + term
    return acc


def full_labeled_trace(g: TorusGraph, l: int, q=None):
    """Plain trace over the full labeled space, for the collapse check
    against l times the standard-basis trace."""
    qv, conv, one = _ring(_q_key(q))
    rows = [build_row_operator(rc, l, qv, one) for rc in column_rows(g, _q_key(q))]
    total = None
    for s in labeled_states(g.L, l):
        key = state_key(s)
        vec: dict[Key, object] = {key: one}
        for op in rows:
            vec = op.apply_vec(vec)
        coeff = vec.get(key)
        if coeff is not None:
            total = coeff if total is None else total + coeff
    return total if total is not None else qv * 0


# ---------------------------------------------------------------------------
# numeric spectral path


@dataclass(frozen=True)
class SectorSpectrum:
    l: int
    k: int
    eigenvalues: tuple[ComplexF, ...]

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)


def order_eigenvalues(values) -> tuple[ComplexF, ...]:
    """Descending modulus, ties by real then imaginary part (1e-9 grain)."""

    def keyfn(z: complex):
        return (-round(abs(z), 9), -round(z.real, 9), -round(z.imag, 9))

    return tuple(sorted((complex(z) for z in values), key=keyfn))


def sector_matrices(g: TorusGraph, l: int, q: float):
    """Float transfer matrix on the labeled space and the basis states."""
    import numpy as np

    if not g.is_homogeneous():
        raise ValueError("spectra need homogeneous couplings")
    basis = (
        labeled_states(g.L, l) if l >= 1 else enumerate_states(g.L, 0)
    )
    index = {state_key(s): i for i, s in enumerate(basis)}
    rc = column_rows(g, float(q))[0]
    op = build_row_operator(rc, l, float(q), 1.0)
    n = len(basis)
    mat = np.zeros((n, n))
    for i_in, s in enumerate(basis):
        for k2, w in op.apply_key(state_key(s)).items():
            mat[index[k2], i_in] += w
    return mat, basis, index


def sector_projector(basis, index, l: int, k: int):
    """Projector onto the D_k component of the labeled space."""
    import numpy as np

    n = len(basis)
    p = np.zeros((n, n), dtype=complex)
    for a in range(1, l + 1):
        phase = complex(
            math.cos(2 * math.pi * k * a / l), math.sin(2 * math.pi * k * a / l)
        )
        for i, s in enumerate(basis):
            p[index[state_key(apply_mark_shift(s, a))], i] += phase / l
    return p


def sector_spectrum(
    g: TorusGraph, l: int, k: int | None, q: RatLike | float
) -> SectorSpectrum:
    """Eigenvalues of the level-l, irrep-D_k diagonal block at numeric Q.

    Builds the labeled-space row operator, projects with the irrep
    projector, extracts the block (whose dimension must equal the standard
    state count), and solves it densely.
    """
    import numpy as np

    if not 0 <= l <= g.L:
        raise ValueError(f"level {l} outside 0..{g.L}")
    if l >= 1 and (k is None or not 1 <= k <= l):
        raise ValueError(f"irrep index {k} outside 1..{l}")
    expected = annulus_state_count(g.L, l)
    guard = max(1, l) * expected
    if guard > 2000:
        raise ValueError(f"labeled space of size {guard} exceeds the dense guard")
    qf = float(q) if isinstance(q, float) else float(as_rat(q))
    mat, basis, index = sector_matrices(g, l, qf)
    if l == 0:
        block = mat.astype(complex)
    else:
        p = sector_projector(basis, index, l, k)
        if np.linalg.norm(p @ p - p) > 1e-10:
            raise InternalCheckError("irrep projector is not idempotent")
        evals, evecs = np.linalg.eigh(p)
        cols = [i for i, ev in enumerate(evals) if abs(ev - 1) < 1e-8]
        if len(cols) != expected:
            raise InternalCheckError(
                f"sector dimension {len(cols)} != {expected} at (l={l}, k={k})"
            )
        b = evecs[:, cols]
        block = b.conj().T @ mat.astype(complex) @ b
    eigenvalues = np.linalg.eigvals(block)
    return SectorSpectrum(l, k if l else 0, order_eigenvalues(eigenvalues))
