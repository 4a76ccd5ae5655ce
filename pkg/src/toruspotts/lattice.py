"""Finite torus graphs.

An L x N torus has vertices indexed x * L + y with x the longitudinal
coordinate (0..N-1, the transfer direction) and y the transverse coordinate
(0..L-1).  Edges carry an integer displacement (dx, dy) recording how the
edge moves in the universal cover, which is what makes winding numbers of
clusters computable: a cycle's displacements sum to (n1 * N, n2 * L).

Multi-edges arising from wraparound at N = 1 or L = 2 are kept as genuine
parallel edges (and self-loops at N = 1); the cluster weight of an edge
subset treats every edge independently, so nothing special is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import RatLike, as_rat, rat_str

KINDS = ("square", "triangular")


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    dx: int
    dy: int
    coupling: Fraction


@dataclass(frozen=True)
class CouplingSpec:
    """How to assign the per-edge couplings v_e = exp(J_e) - 1."""

    mode: str  # "homogeneous" | "explicit" | "seeded"
    value: Fraction | None = None
    values: tuple[Fraction, ...] | None = None
    seed: int | None = None

    @staticmethod
    def homogeneous(value: RatLike) -> "CouplingSpec":
        return CouplingSpec(mode="homogeneous", value=as_rat(value))

    @staticmethod
    def explicit(values: Sequence[RatLike]) -> "CouplingSpec":
        return CouplingSpec(mode="explicit", values=tuple(as_rat(v) for v in values))

    @staticmethod
    def seeded(seed: int) -> "CouplingSpec":
        return CouplingSpec(mode="seeded", seed=seed)

    def resolve(self, count: int) -> tuple[Fraction, ...]:
        if self.mode == "homogeneous":
            assert self.value is not None
            return (self.value,) * count
        if self.mode == "explicit":
            assert self.values is not None
            if len(self.values) != count:
                raise ValueError(
                    f"need {count} couplings, got {len(self.values)}"
                )
            return self.values
        assert self.seed is not None
        return seeded_couplings(count, self.seed)


def seeded_couplings(count: int, seed: int) -> tuple[Fraction, ...]:
    """Reproducible small-rational couplings from a linear congruential
    generator (numerators and denominators in 1..13, platform independent).
    """
    state = seed & 0x7FFFFFFF
    out = []
    for _ in range(count):
        state = (1103515245 * state + 12345) & 0x7FFFFFFF
        num = 1 + (state >> 16) % 13
        den = 1 + (state >> 4) % 13
        out.append(Fraction(num, den))
    return tuple(out)


@dataclass(frozen=True)
class TorusGraph:
    kind: str
    L: int
    N: int
    edges: tuple[Edge, ...]

    @property
    def n_vertices(self) -> int:
        return self.L * self.N

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vertex(self, x: int, y: int) -> int:
        return (x % self.N) * self.L + (y % self.L)

    def coords(self, v: int) -> tuple[int, int]:
        return divmod(v, self.L)

    def is_homogeneous(self) -> bool:
        first = self.edges[0].coupling
        return all(e.coupling == first for e in self.edges)

    @property
    def homogeneous_coupling(self) -> Fraction:
        if not self.is_homogeneous():
            raise ValueError("graph has edge-dependent couplings")
        return self.edges[0].coupling

    def topology_key(self) -> tuple:
        """Key identifying the coupling-independent structure."""
        return (self.kind, self.L, self.N)

    def with_couplings(self, spec: CouplingSpec) -> "TorusGraph":
        values = spec.resolve(self.n_edges)
        edges = tuple(
            Edge(e.u, e.v, e.dx, e.dy, v) for e, v in zip(self.edges, values)
        )
        return TorusGraph(self.kind, self.L, self.N, edges)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "width": self.L,
            "length": self.N,
            "edges": [[e.u, e.v, e.dx, e.dy] for e in self.edges],
            "couplings": [rat_str(e.coupling) for e in self.edges],
        }

    def describe(self) -> str:
        coupling = "inhomogeneous"
        if self.is_homogeneous():
            coupling = f"v={self.homogeneous_coupling}"
        return f"{self.kind} {self.L}x{self.N} ({coupling})"


def build_torus(
    kind: str,
    width: int,
    length: int,
    couplings: CouplingSpec | RatLike = 1,
) -> TorusGraph:
    """Build an L x N torus of the given kind.

    Edge order is a pure function of (kind, width, length): per column x in
    0..N-1, the longitudinal bonds (x,y)-(x+1,y) for y = 0..L-1 with
    displacement (1,0), then on the triangular lattice the diagonal bonds
    (x,y)-(x+1,y+1) with displacement (1,1), then the transverse bonds
    (x,y)-(x,y+1) with displacement (0,1).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown lattice kind {kind!r}")
    if width < 2:
        raise ValueError("width must be at least 2")
    if length < 1:
        raise ValueError("length must be at least 1")
    if not isinstance(couplings, CouplingSpec):
        couplings = CouplingSpec.homogeneous(couplings)

    L, N = width, length
    skeleton: list[tuple[int, int, int, int]] = []
    for x in range(N):
        for y in range(L):
            skeleton.append((x * L + y, ((x + 1) % N) * L + y, 1, 0))
        if kind == "triangular":
            for y in range(L):
                skeleton.append((x * L + y, ((x + 1) % N) * L + (y + 1) % L, 1, 1))
        for y in range(L):
            skeleton.append((x * L + y, x * L + (y + 1) % L, 0, 1))

    values = couplings.resolve(len(skeleton))
    edges = tuple(
        Edge(u, v, dx, dy, w) for (u, v, dx, dy), w in zip(skeleton, values)
    )
    return TorusGraph(kind, L, N, edges)
