"""Golden-file regression: current enumeration vs blessed outputs.

Regenerate with, e.g.:
    toruspotts oracle --lattice square --width 2 --length 2 --q 2 --v 1 \
        --bless --force
(the golden directory is ./golden, overridable via TORUSPOTTS_GOLDEN_DIR).
"""

import json
from pathlib import Path

import pytest

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "golden"

CASES = [
    ("square_2x2_q2_1_v1_1.json", ["--lattice", "square", "--width", "2",
                                   "--length", "2", "--q", "2", "--v", "1"]),
    ("triangular_2x2_q5_2_v3_7.json", ["--lattice", "triangular", "--width", "2",
                                       "--length", "2", "--q", "5/2", "--v", "3/7"]),
    ("square_3x2_poly_seed11.json", ["--lattice", "square", "--width", "3",
                                     "--length", "2", "--poly-q",
                                     "--coupling-seed", "11"]),
]


@pytest.mark.parametrize("name,args", CASES, ids=[c[0] for c in CASES])
def test_against_golden(name, args):
    golden = GOLDEN_DIR / name
    assert golden.exists(), f"missing golden file {golden}"
    from toruspotts.cli import build_parser, _oracle_payload

    parsed = build_parser().parse_args(["oracle", *args])
    payload = _oracle_payload(parsed)
    recorded = json.loads(golden.read_text())
    payload.pop("version", None)
    recorded.pop("version", None)
    assert payload == recorded
