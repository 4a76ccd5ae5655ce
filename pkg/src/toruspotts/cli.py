"""Command line front end.

Subcommands: ``amplitudes``, ``ntor``, ``oracle``, ``characters``,
``spectrum``, ``verify``.  Rational inputs are "p/q" or integer strings;
floats are rejected in exact flags.  Exit codes: 0 success, 1 verification
or golden-file mismatch, 2 invalid input or guard violation.

Golden files live under ./golden (override with TORUSPOTTS_GOLDEN_DIR);
``oracle --bless`` writes them and refuses to overwrite without --force.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import EnumerationGuard
from .exact import PolyQ, as_rat, rat_str
from .lattice import CouplingSpec, build_torus
from .numtheory import annulus_state_count, divisors, irrep_for_divisor, sector_amplitude
from .oracle import characters_from_table, restricted_z_table
from .states import enumerate_states
from .transfer import class_trace, irrep_trace, level_trace, sector_spectrum, twisted_trace
from .verify import desk_suite, quick_suite, report_to_json_text, report_to_text


def _rat(text: str) -> Fraction:
    try:
        return as_rat(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lattice", choices=("square", "triangular"), required=True)
    p.add_argument("--width", type=int, required=True, help="transverse width L")
    p.add_argument("--length", type=int, required=True, help="longitudinal length N")
    p.add_argument(
        "--coupling",
        "--v",
        dest="coupling",
        type=_rat,
        default=Fraction(1),
        help="homogeneous edge coupling v (rational)",
    )
    p.add_argument(
        "--coupling-seed",
        type=int,
        default=None,
        help="seed for reproducible edge-dependent couplings",
    )


def _graph(args):
    spec = (
        CouplingSpec.seeded(args.coupling_seed)
        if args.coupling_seed is not None
        else CouplingSpec.homogeneous(args.coupling)
    )
    return build_torus(args.lattice, args.width, args.length, spec)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _golden_dir() -> Path:
    return Path(os.environ.get("TORUSPOTTS_GOLDEN_DIR", "golden"))


def _poly_str(p: PolyQ) -> str:
    return str(p)


# ---------------------------------------------------------------------------
# subcommands


def cmd_amplitudes(args) -> int:
    rows = []
    for l in range(0, args.lmax + 1):
        if l == 0:
            entries = [(0, "-", PolyQ.one())]
        else:
            entries = [
                (l, str(m), sector_amplitude(l, irrep_for_divisor(l, m)))
                for m in divisors(l)
            ]
        for l_, m, poly in entries:
            row = {"level": l_, "divisor": m, "amplitude": _poly_str(poly)}
            if args.q is not None:
                row["value_at_q"] = rat_str(poly.eval(args.q))
            rows.append(row)
    if args.format == "json":
        _emit(json.dumps({"version": __version__, "rows": rows}, indent=2), args.output)
    else:
        header = ["level", "divisor", "amplitude"]
        if args.q is not None:
            header.append(f"value_at_q={args.q}")
        lines = [f"# toruspotts {__version__}", ",".join(header)]
        for row in rows:
            cells = [str(row["level"]), str(row["divisor"]), f"\"{row['amplitude']}\""]
            if args.q is not None:
                cells.append(row["value_at_q"])
            lines.append(",".join(cells))
        _emit("\n".join(lines), args.output)
    return 0


def cmd_ntor(args) -> int:
    rows = []
    ok = True
    for l in range(0, args.width + 1):
        formula = annulus_state_count(args.width, l)
        enumerated = len(enumerate_states(args.width, l))
        ok = ok and formula == enumerated
        rows.append(
            {"level": l, "formula": formula, "enumerated": enumerated}
        )
    if args.format == "json":
        _emit(
            json.dumps(
                {"version": __version__, "width": args.width, "rows": rows}, indent=2
            ),
            args.output,
        )
    else:
        lines = [f"# toruspotts {__version__}", "level,formula,enumerated"]
        for row in rows:
            lines.append(f"{row['level']},{row['formula']},{row['enumerated']}")
        _emit("\n".join(lines), args.output)
    return 0 if ok else 1


def _oracle_payload(args) -> dict:
    g = _graph(args)
    q = None if args.poly_q else args.q
    table = restricted_z_table(g, q)
    chars = characters_from_table(table)

    def enc(v):
        return v.to_json() if isinstance(v, PolyQ) else rat_str(v)

    return {
        "version": __version__,
        "graph": g.to_json(),
        "q": "poly" if q is None else rat_str(as_rat(q)),
        "classes": {
            f"{j},{n1}": enc(v) for (j, n1), v in sorted(table.classes.items())
        },
        "z": enc(table.z),
        "levels": [enc(v) for v in chars.levels],
        "class_characters": {
            f"{d},{n1}": enc(v) for (d, n1), v in sorted(chars.per_class.items())
        },
        "class_characters_aggregated": {
            str(d): enc(v) for d, v in sorted(chars.aggregated.items())
        },
    }


def _golden_name(args) -> str:
    coupling = (
        f"seed{args.coupling_seed}"
        if args.coupling_seed is not None
        else f"v{args.coupling.numerator}_{args.coupling.denominator}"
    )
    qpart = "poly" if args.poly_q else f"q{args.q.numerator}_{args.q.denominator}"
    return f"{args.lattice}_{args.width}x{args.length}_{qpart}_{coupling}.json"


def cmd_oracle(args) -> int:
    payload = _oracle_payload(args)
    text = json.dumps(payload, indent=2, sort_keys=True)
    golden = _golden_dir() / _golden_name(args)
    if args.bless:
        if golden.exists() and not args.force:
            print(f"golden file {golden} exists; use --force to overwrite", file=sys.stderr)
            return 2
        golden.parent.mkdir(parents=True, exist_ok=True)
        golden.write_text(text + "\n")
        print(f"blessed {golden}")
        return 0
    _emit(text, args.output)
    if golden.exists():
        recorded = json.loads(golden.read_text())
        mine = json.loads(text)
        recorded.pop("version", None)
        mine.pop("version", None)
        if recorded != mine:
            print(f"MISMATCH against golden file {golden}", file=sys.stderr)
            return 1
        print(f"matches golden file {golden}", file=sys.stderr)
    return 0


def cmd_characters(args) -> int:
    g = _graph(args)
    q = None if args.poly_q else args.q
    l = args.level

    def enc(v):
        return v.to_json() if isinstance(v, PolyQ) else rat_str(v)

    if args.twist is not None and args.irrep is not None:
        print("choose one of --twist / --irrep", file=sys.stderr)
        return 2
    if args.twist is not None:
        value = twisted_trace(g, l, args.twist, q)
        payload = {"level": l, "twist": args.twist, "value": enc(value)}
    elif args.irrep is not None:
        value = irrep_trace(g, l, args.irrep, q)
        payload = {"level": l, "irrep": args.irrep, "value": enc(value)}
    else:
        payload = {"level": l, "value": enc(level_trace(g, l, q))}
        if l >= 2:
            payload["classes"] = {
                str(d): enc(class_trace(g, l, d, q)) for d in divisors(l)
            }
    payload["version"] = __version__
    payload["graph"] = g.describe()
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.output)
    return 0


def cmd_spectrum(args) -> int:
    g = _graph(args)
    spec = sector_spectrum(g, args.level, args.irrep, args.q)
    payload = {
        "version": __version__,
        "graph": g.describe(),
        "level": spec.l,
        "irrep": spec.k,
        "dimension": spec.dimension,
        "eigenvalues_float": [[ev.real, ev.imag] for ev in spec.eigenvalues],
    }
    _emit(json.dumps(payload, indent=2), args.output)
    return 0


def cmd_verify(args) -> int:
    rep = desk_suite() if args.suite == "desk" else quick_suite()
    if args.only:
        rep = rep.filter(args.only)
        if not rep.checks:
            print(f"no checks with id {args.only!r}", file=sys.stderr)
            return 2
    if args.format == "json":
        _emit(report_to_json_text(rep), args.output)
    else:
        _emit(f"# toruspotts {__version__}\n" + report_to_text(rep), args.output)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toruspotts",
        description="Exact cluster-weight decompositions on finite tori",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitudes", help="eigenvalue amplitude table")
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--q", type=_rat, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_amplitudes)

    p = sub.add_parser("ntor", help="connectivity-state dimension table")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_ntor)

    p = sub.add_parser("oracle", help="enumerate a torus and emit the class table")
    _add_graph_args(p)
    p.add_argument("--q", type=_rat, default=Fraction(2))
    p.add_argument("--poly-q", action="store_true")
    p.add_argument("--bless", action="store_true", help="write the golden file")
    p.add_argument("--force", action="store_true")
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("characters", help="transfer-route characters")
    _add_graph_args(p)
    p.add_argument("--q", type=_rat, default=Fraction(2))
    p.add_argument("--poly-q", action="store_true")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--twist", type=int, default=None)
    p.add_argument("--irrep", type=int, default=None)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_characters)

    p = sub.add_parser("spectrum", help="sector eigenvalues (numeric)")
    _add_graph_args(p)
    p.add_argument("--q", type=_rat, default=Fraction(2))
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--irrep", type=int, default=None)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", choices=("quick", "desk"), default="quick")
    p.add_argument("--only", default=None, help="filter by check id")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except EnumerationGuard as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
