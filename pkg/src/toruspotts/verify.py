"""Cross-module verification.

Collects every identity the package claims into named checks with explicit
residuals.  Exact checks carry an exact residual (rational or polynomial)
and pass only when it is identically zero; numeric checks carry a float
residual and a stated tolerance.  The two kinds are never mixed: an
identity proved combinatorially is checked exactly, and only the
eigenvalue-resolved spectral statements use floats.

Reports are deterministic: same inputs, same check order, same strings.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import HomotopyViolation
from .exact import PolyQ, as_rat, rat_str
from .lattice import CouplingSpec, TorusGraph, build_torus
from .numtheory import (
    amplitude_closed_form,
    amplitude_table,
    annulus_state_count,
    class_members,
    divisor_for_irrep,
    divisors,
    irrep_for_divisor,
    level_amplitude_sum,
    level_amplitude_term,
    sector_amplitude,
    sector_amplitude_term,
    sum_of_sector_amplitudes,
)
from .oracle import (
    OracleCharacters,
    RestrictedZTable,
    characters_from_table,
    class_counts,
    class_counts_python,
    partition_function_plain,
    reconstruction_residuals,
    restricted_z_table,
)
from .states import enumerate_states, labeled_states
from .transfer import (
    class_trace,
    full_labeled_trace,
    irrep_trace,
    level_trace,
    sector_spectrum,
    twisted_trace,
)

NUMERIC_TOL = 1e-8
IMAG_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    check_id: str
    label: str
    kind: str  # "exact" | "numeric"
    residual: str
    passed: bool
    tolerance: float | None = None

    def line(self) -> str:
        mark = "pass" if self.passed else "FAIL"
        tol = "" if self.tolerance is None else f" (tol {self.tolerance:g})"
        return f"[{mark}] {self.check_id} {self.label}: residual {self.residual}{tol}"


@dataclass
class VerificationReport:
    context: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def exact(self, check_id: str, label: str, residual) -> None:
        if isinstance(residual, PolyQ):
            zero = residual.is_zero()
            text = "0" if zero else str(residual)
        else:
            zero = residual == 0
            text = "0" if zero else str(residual)
        self.checks.append(Check(check_id, label, "exact", text, zero))

    def exact_flag(self, check_id: str, label: str, ok: bool, note: str = "") -> None:
        self.checks.append(
            Check(check_id, label, "exact", note or ("0" if ok else "violated"), ok)
        )

    def numeric(
        self, check_id: str, label: str, residual: float, tol: float = NUMERIC_TOL
    ) -> None:
        self.checks.append(
            Check(
                check_id,
                label,
                "numeric",
                f"{residual:.3e}",
                abs(residual) < tol,
                tol,
            )
        )

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    def filter(self, check_id: str) -> "VerificationReport":
        out = VerificationReport(context=dict(self.context))
        out.checks = [c for c in self.checks if c.check_id == check_id]
        return out

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        out.append(
            f"{'PASS' if self.passed else 'FAIL'}: "
            f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks"
        )
        return out

    def to_json(self) -> dict:
        return {
            "context": self.context,
            "passed": self.passed,
            "checks": [
                {
                    "id": c.check_id,
                    "label": c.label,
                    "kind": c.kind,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
        }


# ---------------------------------------------------------------------------
# amplitude-level checks


def verify_amplitudes(
    l_max: int = 10, prime_levels: tuple[int, ...] = (2, 3, 5, 7, 11)
) -> VerificationReport:
    """Polynomial-exact checks on the amplitude layer."""
    rep = VerificationReport(context={"suite": "amplitudes", "l_max": l_max})
    q = PolyQ.q()
    one = PolyQ.one()

    for l in range(2, l_max + 1):
        for m in divisors(l):
            rep.exact(
                "amplitude-two-routes",
                f"l={l} m={m}",
                sector_amplitude(l, irrep_for_divisor(l, m))
                - amplitude_closed_form(l, m),
            )

    doubled = amplitude_closed_form(2, 2, doubled_cross_term=True)
    rep.exact(
        "amplitude-doubled-cross-term",
        "l=2 m=2 discrepancy equals Q-1",
        doubled - sector_amplitude(2, 1) - (q - one),
    )

    for l in range(1, l_max + 1):
        rep.exact(
            "amplitude-sum-rule",
            f"l={l}",
            sum_of_sector_amplitudes(l) - level_amplitude_sum(l),
        )

    for l in range(1, l_max + 1):
        table = amplitude_table(l)
        distinct = len({tuple(p.coeffs) for p in table.values()})
        rep.exact_flag(
            "amplitude-distinct-count",
            f"l={l}",
            distinct == len(divisors(l)),
            f"{distinct} distinct vs {len(divisors(l))} divisors",
        )
        for k in range(1, l + 1):
            rep.exact(
                "amplitude-gcd-structure",
                f"l={l} k={k}",
                sector_amplitude(l, k) - table[divisor_for_irrep(l, k)],
            )

    for l in prime_levels:
        b = level_amplitude_sum(l)
        ident = (b - PolyQ.constant(l - 1)).scale(Fraction(1, l))
        other = (b + one).scale(Fraction(1, l))
        rep.exact("amplitude-prime-identity-rep", f"l={l}", sector_amplitude(l, l) - ident)
        for k in range(1, l):
            rep.exact(
                "amplitude-prime-other-reps", f"l={l} k={k}", sector_amplitude(l, k) - other
            )

    level2 = {tuple(p.coeffs) for p in amplitude_table(2).values()}
    expected2 = {
        tuple((q * (q - 3 * one)).scale(Fraction(1, 2)).coeffs),
        tuple(((q - one) * (q - 2 * one)).scale(Fraction(1, 2)).coeffs),
    }
    rep.exact_flag(
        "amplitude-level2-closed-forms",
        "Q(Q-3)/2 and (Q-1)(Q-2)/2",
        level2 == expected2,
    )

    for l in range(1, min(l_max, 8) + 1):
        for k in range(1, l + 1):
            acc = PolyQ.zero()
            for j in range(0, l + 1):
                acc = acc + sector_amplitude_term(l, k, j)
            rep.exact(
                "amplitude-term-sum", f"l={l} k={k}", acc - sector_amplitude(l, k)
            )
        for j in range(0, l + 1):
            acc = PolyQ.zero()
            for k in range(1, l + 1):
                acc = acc + sector_amplitude_term(l, k, j)
            rep.exact(
                "amplitude-term-sum-rule",
                f"l={l} j={j}",
                acc - level_amplitude_term(l, j),
            )
    return rep


# ---------------------------------------------------------------------------
# state-space checks


def verify_states(width_max: int = 6, labeled_width_max: int = 5) -> VerificationReport:
    rep = VerificationReport(context={"suite": "states", "width_max": width_max})
    for width in range(2, width_max + 1):
        for marks in range(0, width + 1):
            got = len(enumerate_states(width, marks))
            rep.exact_flag(
                "state-count",
                f"L={width} l={marks}",
                got == annulus_state_count(width, marks),
                f"{got} vs {annulus_state_count(width, marks)}",
            )
    for width in range(2, labeled_width_max + 1):
        for marks in range(1, width + 1):
            got = len(labeled_states(width, marks))
            want = marks * annulus_state_count(width, marks)
            rep.exact_flag(
                "labeled-state-count",
                f"L={width} l={marks}",
                got == want,
                f"{got} vs {want}",
            )
    return rep


def verify_homotopy_invariants(g: TorusGraph, engine: str = "python") -> VerificationReport:
    """Full-enumeration planarity invariants on one graph.

    summarize_config raises on any violation, so a clean pass over all
    subsets is the check; the class counts are also compared between the
    python and compiled engines.
    """
    rep = VerificationReport(
        context={"suite": "homotopy", "graph": g.describe(), "engine": engine}
    )
    try:
        py = class_counts_python(g)
        rep.exact_flag(
            "homotopy-invariants",
            f"{g.describe()} all {1 << g.n_edges} subsets",
            True,
            "no violations",
        )
    except HomotopyViolation as exc:
        rep.exact_flag("homotopy-invariants", g.describe(), False, str(exc))
        return rep
    from .oracle import class_counts_kernel

    kern = class_counts_kernel(g)
    rep.exact_flag(
        "homotopy-engines-agree",
        g.describe(),
        py == kern,
        "python and compiled counts match" if py == kern else "count mismatch",
    )
    return rep


# ---------------------------------------------------------------------------
# per-graph checks


def _fmt_q(q: Fraction | None) -> str:
    return "poly" if q is None else str(q)


def verify_graph(
    g: TorusGraph,
    q_values: tuple = (2, 3, Fraction(5, 2)),
    poly: bool = True,
    spectral: bool = False,
    spectral_q=2,
) -> VerificationReport:
    """Run the full identity suite on one graph.

    Exact tier: restricted table totals, equality of the transfer and
    enumeration routes for level and class characters, the binomial
    inversion round trip, and all decomposition reconstructions, at every
    fixed q and (optionally) at the polynomial level.  Numeric tier
    (optional): sector spectra against the exact characters and the
    amplitude-weighted eigenvalue sum against Z.
    """
    rep = VerificationReport(context={"suite": "graph", "graph": g.describe()})
    modes: list[Fraction | None] = [as_rat(q) for q in q_values]
    if poly:
        modes.append(None)

    tables: dict[Fraction | None, RestrictedZTable] = {}
    chars: dict[Fraction | None, OracleCharacters] = {}
    for q in modes:
        t = restricted_z_table(g, q)
        tables[q] = t
        chars[q] = characters_from_table(t)

    if g.n_edges <= 2 * 14:
        for q in modes:
            rep.exact(
                "partition-sum",
                f"{g.describe()} q={_fmt_q(q)}",
                tables[q].z - partition_function_plain(g, q),
            )

    if None in tables:
        for q in modes:
            if q is None:
                continue
            poly_z = tables[None].z
            rep.exact(
                "poly-fixed-agreement",
                f"{g.describe()} q={q}",
                poly_z.eval(q) - tables[q].z,
            )

    for q in modes:
        for l in range(0, g.L + 1):
            rep.exact(
                "level-trace-match",
                f"{g.describe()} q={_fmt_q(q)} l={l}",
                level_trace(g, l, q) - chars[q].levels[l],
            )
        for (d, n1), value in sorted(chars[q].per_class.items()):
            l = d * n1
            rep.exact(
                "class-trace-match",
                f"{g.describe()} q={_fmt_q(q)} d={d} n1={n1}",
                class_trace(g, l, d, q) - value,
            )
        for l in range(2, g.L + 1):
            for d in divisors(l):
                members = class_members(l, d)
                base = twisted_trace(g, l, members[0], q)
                for a in members[1:]:
                    rep.exact(
                        "twisted-class-constancy",
                        f"{g.describe()} q={_fmt_q(q)} l={l} d={d} a={a}",
                        twisted_trace(g, l, a, q) - base,
                    )

    if g.L <= 3:
        q0 = modes[0]
        for l in range(0, g.L + 1):
            rep.exact(
                "labeled-trace-collapse",
                f"{g.describe()} q={_fmt_q(q0)} l={l}",
                full_labeled_trace(g, l, q0) - level_trace(g, l, q0),
            )

    for q in modes:
        rec = reconstruction_residuals(tables[q], chars[q])
        for check_id, label, residual in rec.items:
            rep.exact(check_id, f"{g.describe()} q={_fmt_q(q)} {label}", residual)

    for q in modes:
        if q is None:
            continue
        acc = None
        for l in range(0, g.L + 1):
            for k in range(1, l + 1) if l else [None]:
                term = irrep_trace(g, l, k, q) * sector_amplitude(l, k).eval(q)
                acc = term if acc is None else acc + term
        rep.exact(
            "sector-decomposition-exact",
            f"{g.describe()} q={q}",
            acc - tables[q].z,
        )

    if spectral:
        rep.extend(verify_spectral(g, spectral_q, tables.get(as_rat(spectral_q))))
    return rep


def verify_spectral(
    g: TorusGraph, q=2, table: RestrictedZTable | None = None
) -> VerificationReport:
    """Numeric spectral tier at fixed q: dimensions, power sums, character
    inversion, and the amplitude-weighted eigenvalue decomposition of Z."""
    import cmath

    import numpy as np

    rep = VerificationReport(
        context={"suite": "spectral", "graph": g.describe(), "q": str(q)}
    )
    qr = as_rat(q)
    if table is None:
        table = restricted_z_table(g, qr)
    z = float(table.z)

    total = 0j
    for l in range(0, g.L + 1):
        irreps = range(1, l + 1) if l else [None]
        exact_by_k: dict[int | None, Fraction] = {}
        for k in irreps:
            spec = sector_spectrum(g, l, k, qr)
            rep.exact_flag(
                "sector-dimension",
                f"{g.describe()} l={l} k={k}",
                spec.dimension == annulus_state_count(g.L, l),
                f"{spec.dimension} vs {annulus_state_count(g.L, l)}",
            )
            power_sum = sum(ev**g.N for ev in spec.eigenvalues)
            exact = irrep_trace(g, l, k, qr)
            exact_by_k[k] = exact
            scale = max(1.0, abs(float(exact)))
            rep.numeric(
                "spectrum-power-sum",
                f"{g.describe()} l={l} k={k}",
                abs(power_sum - float(exact)) / scale,
            )
            amp = sector_amplitude(l, k).eval(qr)
            total += complex(float(amp)) * power_sum
        if l >= 1:
            for a in range(1, l + 1):
                inv = (
                    sum(
                        cmath.exp(2j * cmath.pi * k * a / l) * float(exact_by_k[k])
                        for k in irreps
                    )
                    / l
                )
                direct = float(twisted_trace(g, l, a, qr))
                rep.numeric(
                    "character-inversion",
                    f"{g.describe()} l={l} a={a}",
                    abs(inv - direct) / max(1.0, abs(direct)),
                    tol=1e-9,
                )
            acc = None
            for k in irreps:
                acc = exact_by_k[k] if acc is None else acc + exact_by_k[k]
            rep.exact(
                "irrep-sum-collapse",
                f"{g.describe()} l={l}",
                acc - level_trace(g, l, qr),
            )

    rep.numeric(
        "eigenvalue-decomposition",
        f"{g.describe()} q={q} real part",
        abs(total.real - z) / max(1.0, abs(z)),
    )
    rep.numeric(
        "eigenvalue-decomposition",
        f"{g.describe()} q={q} imag part",
        abs(total.imag) / max(1.0, abs(z)),
        tol=IMAG_TOL,
    )
    return rep


# ---------------------------------------------------------------------------
# suites


DESK_KINDS = ("square", "triangular")
DESK_SIZES = ((2, 2), (2, 3), (3, 2), (3, 3))
DESK_QS = (2, 3, Fraction(5, 2))
DESK_VS = (1, Fraction(-1, 2), Fraction(3, 7))


def desk_graphs() -> list[TorusGraph]:
    out = []
    for kind, (L, N) in itertools.product(DESK_KINDS, DESK_SIZES):
        for v in DESK_VS:
            out.append(build_torus(kind, L, N, v))
    return out


def seeded_graphs() -> list[TorusGraph]:
    return [
        build_torus("square", 3, 2, CouplingSpec.seeded(11)),
        build_torus("triangular", 2, 2, CouplingSpec.seeded(7)),
    ]


def desk_suite(spectral: bool = True) -> VerificationReport:
    """The full desk verification matrix."""
    rep = VerificationReport(context={"suite": "desk"})
    rep.extend(verify_amplitudes(10))
    rep.extend(verify_states(6, 5))
    rep.extend(verify_homotopy_invariants(build_torus("square", 3, 3, 1)))
    for g in desk_graphs():
        poly = g.n_edges <= 18
        rep.extend(verify_graph(g, DESK_QS, poly=poly, spectral=False))
    for g in seeded_graphs():
        rep.extend(verify_graph(g, DESK_QS, poly=True, spectral=False))
    if spectral:
        for kind, (L, N) in itertools.product(DESK_KINDS, DESK_SIZES):
            g = build_torus(kind, L, N, 1)
            rep.extend(verify_spectral(g, 2))
    return rep


def quick_suite() -> VerificationReport:
    """A small smoke suite for the command line."""
    rep = VerificationReport(context={"suite": "quick"})
    rep.extend(verify_amplitudes(6, prime_levels=(2, 3, 5)))
    rep.extend(verify_states(4, 4))
    for kind in DESK_KINDS:
        g = build_torus(kind, 2, 2, 1)
        rep.extend(verify_graph(g, (2,), poly=True, spectral=False))
    rep.extend(verify_spectral(build_torus("square", 2, 2, 1), 2))
    return rep


def report_to_text(rep: VerificationReport) -> str:
    return "\n".join(rep.lines())


def report_to_json_text(rep: VerificationReport) -> str:
    return json.dumps(rep.to_json(), indent=2, sort_keys=True)
