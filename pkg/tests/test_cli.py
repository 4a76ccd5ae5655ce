import json
import subprocess
import sys

import pytest

from toruspotts.cli import main


def run_cli(args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "toruspotts.cli", *args],
        capture_output=True,
        text=True,
        **kw,
    )


def test_amplitudes_table(capsys):
    assert main(["amplitudes", "--lmax", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1] == "level,divisor,amplitude"
    rows = out[2:]
    assert rows[0] == '0,-,"1"'
    assert rows[1] == '1,1,"Q - 1"'
    assert rows[2] == '2,1,"1/2*Q^2 - 3/2*Q"'
    assert rows[3] == '2,2,"1/2*Q^2 - 3/2*Q + 1"'


def test_amplitudes_with_value(capsys):
    assert main(["amplitudes", "--lmax", "1", "--q", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-1].endswith("2/1")


def test_ntor_table(capsys):
    assert main(["ntor", "--width", "4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "2,28,28" in out


def test_amplitudes_json_deterministic(capsys):
    main(["amplitudes", "--lmax", "3", "--format", "json"])
    first = capsys.readouterr().out
    main(["amplitudes", "--lmax", "3", "--format", "json"])
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert doc["rows"][0]["amplitude"] == "1"


def test_characters_subcommand(capsys):
    rc = main(
        [
            "characters",
            "--lattice",
            "square",
            "--width",
            "2",
            "--length",
            "2",
            "--q",
            "2",
            "--level",
            "1",
        ]
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == "154/1"


def test_characters_twist(capsys):
    rc = main(
        [
            "characters",
            "--lattice",
            "triangular",
            "--width",
            "2",
            "--length",
            "2",
            "--q",
            "2",
            "--level",
            "2",
            "--twist",
            "1",
        ]
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == "2/1"


def test_spectrum_subcommand(capsys):
    rc = main(
        [
            "spectrum",
            "--lattice",
            "square",
            "--width",
            "2",
            "--length",
            "3",
            "--q",
            "2",
            "--level",
            "1",
            "--irrep",
            "1",
        ]
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["dimension"] == 3


def test_oracle_subcommand(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("TORUSPOTTS_GOLDEN_DIR", str(tmp_path))
    args = [
        "oracle",
        "--lattice",
        "square",
        "--width",
        "2",
        "--length",
        "2",
        "--q",
        "2",
        "--v",
        "1",
    ]
    assert main(args) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["z"] == "706/1"

    assert main(args + ["--bless"]) == 0
    capsys.readouterr()
    # blessed file exists, so re-blessing without --force is refused
    assert main(args + ["--bless"]) == 2
    capsys.readouterr()
    assert main(args + ["--bless", "--force"]) == 0
    capsys.readouterr()
    # and a plain run now compares against it
    assert main(args) == 0


def test_invalid_inputs_exit_2():
    # argparse rejects the float before dispatch
    proc = run_cli(["amplitudes", "--lmax", "2", "--q", "2.5"])
    assert proc.returncode == 2
    proc = run_cli(["oracle", "--lattice", "hex", "--width", "2", "--length", "2"])
    assert proc.returncode == 2
    proc = run_cli(
        ["oracle", "--lattice", "square", "--width", "4", "--length", "4"]
    )
    assert proc.returncode == 2  # enumeration guard


def test_verify_quick_suite_exit_zero():
    proc = run_cli(["verify", "--suite", "quick"])
    assert proc.returncode == 0, proc.stdout[-2000:] + proc.stderr[-2000:]
    assert "PASS" in proc.stdout


def test_verify_only_filter(capsys):
    assert main(["verify", "--suite", "quick", "--only", "amplitude-sum-rule"]) == 0
    out = capsys.readouterr().out
    assert "amplitude-sum-rule" in out
    assert main(["verify", "--suite", "quick", "--only", "no-such-check"]) == 2
