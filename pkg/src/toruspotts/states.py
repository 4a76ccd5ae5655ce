"""Annulus connectivity states.

A state is a partition of L cyclic boundary points with l of its blocks
marked; marked blocks are the ones bridged across the annulus to the other
boundary.  Membership is decided by three admissibility rules:

(a) every pair of blocks is non-crossing in the cyclic sense (no
    interleaved representatives);
(b) for every unmarked block U, all marked blocks lie in a single
    arc-region (cyclic gap) of U;
(c) for every marked block A, all other marked blocks lie in a single
    arc-region of A.

Rules (b) and (c) say that anything bridged must reach the opposite
boundary, which the blocks of a non-crossing partition can obstruct.  The
enumeration is validated on every call against the known dimension count
``annulus_state_count``; a mismatch is a hard failure because it would
falsify the membership rules themselves.

Marked blocks carry optional labels 1..l assigned in canonical cyclic
order.  The cyclic group acts on labels by shifting them along that order;
the orbit of any labeled state has exactly l members.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .errors import InternalCheckError
from .numtheory import annulus_state_count


@dataclass(frozen=True)
class ConnState:
    """Connectivity state: blocks sorted by least point; marked block
    indices ascending; labels (when present) aligned with ``marked``."""

    blocks: tuple[tuple[int, ...], ...]
    marked: tuple[int, ...]
    labels: tuple[int, ...] | None = None

    @property
    def level(self) -> int:
        return len(self.marked)

    @property
    def width(self) -> int:
        return sum(len(b) for b in self.blocks)

    def text(self) -> str:
        parts = []
        mark_of = dict(zip(self.marked, self.labels or ())) if self.labels else {}
        for i, b in enumerate(self.blocks):
            body = "{" + ",".join(map(str, b)) + "}"
            if i in self.marked:
                body += "•" + (str(mark_of[i]) if self.labels else "")
            parts.append(body)
        return "".join(parts)


@dataclass(frozen=True)
class MarkPermutation:
    """Power a of the elementary cyclic shift at level l; a = l is the
    identity."""

    l: int
    a: int

    def __post_init__(self) -> None:
        if not 1 <= self.a <= self.l:
            raise ValueError(f"exponent {self.a} outside 1..{self.l}")


def _set_partitions(n: int) -> Iterator[list[list[int]]]:
    """All set partitions of 0..n-1 via restricted growth strings."""
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(i: int, maxseen: int) -> Iterator[list[list[int]]]:
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(maxseen + 1)]
            for pt, b in enumerate(rgs):
                blocks[b].append(pt)
            yield blocks
            return
        for b in range(maxseen + 2):
            rgs[i] = b
            yield from rec(i + 1, max(maxseen, b))

    rgs[0] = 0
    yield from rec(1, 0)


def _gap_index(block: tuple[int, ...], point: int) -> int:
    """Which cyclic gap of ``block`` contains ``point``.

    For block points p_0 < ... < p_{k-1} the gaps are numbered by the point
    they follow: gap i is the open cyclic arc (p_i, p_{i+1}), with gap k-1
    wrapping around.
    """
    idx = bisect_left(block, point)
    if idx == 0 or idx == len(block):
        return len(block) - 1
    return idx - 1


def _in_single_gap(block: tuple[int, ...], other: tuple[int, ...]) -> bool:
    gaps = {_gap_index(block, p) for p in other}
    return len(gaps) == 1


def _noncrossing(blocks: tuple[tuple[int, ...], ...]) -> bool:
    for a, b in combinations(blocks, 2):
        if len(a) > 1 and not _in_single_gap(a, b):
            return False
    return True


def _marks_admissible(
    blocks: tuple[tuple[int, ...], ...], marked: tuple[int, ...]
) -> bool:
    marked_set = set(marked)
    for i, block in enumerate(blocks):
        if len(block) <= 1:
            continue
        if i in marked_set:
            others = [p for m in marked if m != i for p in blocks[m]]
        else:
            others = [p for m in marked for p in blocks[m]]
        if others and not _in_single_gap(block, tuple(others)):
            return False
    return True


def enumerate_states(width: int, marks: int) -> tuple[ConnState, ...]:
    """All admissible unlabeled states, deterministically ordered.

    The count is compared against the closed-form dimension on every call;
    disagreement raises InternalCheckError (it would mean the admissibility
    rules are wrong, not the formula).
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    if not 0 <= marks <= width:
        raise ValueError(f"marks {marks} outside 0..{width}")
    out: list[ConnState] = []
    for raw in _set_partitions(width):
        blocks = tuple(tuple(b) for b in sorted(raw, key=lambda b: b[0]))
        if not _noncrossing(blocks):
            continue
        if len(blocks) < marks:
            continue
        for marked in combinations(range(len(blocks)), marks):
            if _marks_admissible(blocks, marked):
                out.append(ConnState(blocks, marked))
    expected = annulus_state_count(width, marks)
    if len(out) != expected:
        raise InternalCheckError(
            f"state count {len(out)} != {expected} at width={width}, "
            f"marks={marks}; admissibility rules falsified"
        )
    return tuple(out)


def canonical_labels(state: ConnState) -> ConnState:
    """Assign labels 1..l to the marked blocks in canonical cyclic order.

    Blocks are already sorted by least point and the block holding the
    smallest marked point comes first among the marked ones, so the
    canonical order is simply ascending block index.
    """
    if state.level < 1:
        raise ValueError("no marked blocks to label")
    return ConnState(state.blocks, state.marked, tuple(range(1, state.level + 1)))


def apply_mark_shift(state: ConnState, perm: MarkPermutation | int) -> ConnState:
    """Shift labels cyclically: the label at position p moves to position
    p + a along the canonical cyclic order of marked blocks."""
    if state.labels is None:
        raise ValueError("state is unlabeled")
    l = state.level
    a = perm.a if isinstance(perm, MarkPermutation) else perm
    if isinstance(perm, MarkPermutation) and perm.l != l:
        raise ValueError(f"permutation level {perm.l} != state level {l}")
    if not 1 <= a <= l:
        raise ValueError(f"exponent {a} outside 1..{l}")
    new_labels = [0] * l
    for pos in range(l):
        new_labels[(pos + a) % l] = state.labels[pos]
    return ConnState(state.blocks, state.marked, tuple(new_labels))


def labeled_states(width: int, marks: int) -> tuple[ConnState, ...]:
    """The full labeled space: every cyclic relabeling of every standard
    state; size marks * annulus_state_count(width, marks)."""
    if marks == 0:
        return enumerate_states(width, 0)
    out = []
    for s in enumerate_states(width, marks):
        base = canonical_labels(s)
        for a in range(1, marks + 1):
            out.append(apply_mark_shift(base, a))
    if len(set(out)) != len(out):
        raise InternalCheckError("labeled states collide; orbit logic broken")
    return tuple(out)


def rotate_state(state: ConnState, shift: int, width: int) -> ConnState:
    """Rotate all points by ``shift`` and re-canonicalize (marks follow
    their blocks, labels are dropped)."""
    moved = [tuple(sorted((p + shift) % width for p in b)) for b in state.blocks]
    order = sorted(range(len(moved)), key=lambda i: moved[i])
    blocks = tuple(moved[i] for i in order)
    inv = {old: new for new, old in enumerate(order)}
    marked = tuple(sorted(inv[m] for m in state.marked))
    return ConnState(blocks, marked)
