from __future__ import annotations

import json
import subprocess
import sys

import pytest

from polylogs import cli
from polylogs.cli import main
from polylogs.errors import InvariantViolation, NonConvergenceError, PrecisionTooLowError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(out: str) -> list[str]:
    return [line for line in out.splitlines() if not line.startswith("#")]


def test_monodromy_s1(capsys):
    code, out, _ = run(capsys, "monodromy", "--word", "s1", "--n", "2")
    assert code == 0
    assert out.startswith("# precision: bits=256 tol=1e-30")
    assert body(out)[0].split() == ["[", "1", "-1", "0]"]


def test_tame(capsys):
    code, out, _ = run(capsys, "tame", "--f", "t", "--g", "t", "--at", "0")
    assert code == 0 and body(out) == ["-1"]


def test_d2_half(capsys):
    code, out, _ = run(capsys, "d2", "--x", "0.5")
    assert code == 0 and body(out)[1].split() == ["0.5", "0"]


def test_json_lines(capsys):
    code, out, _ = run(capsys, "d2", "--x", "0+1i", "--format", "json-lines")
    lines = [json.loads(line) for line in out.splitlines()]
    assert lines[0]["precision"]["bits"] == 256
    assert lines[1]["d2"].startswith("0.91596559417721901505460351493")


def test_csv_grid(capsys):
    code, out, _ = run(capsys, "d2-grid", "--re-range", "0:1", "--im-range", "0:0", "--step", "1/2", "--format", "csv")
    assert body(out) == ["re,im,d2", "0,0,0", "1/2,0,0", "1,0,0"]


def test_deterministic(capsys):
    first = run(capsys, "five-term", "--x", "2+1i", "--y", "1/3")
    second = run(capsys, "five-term", "--x", "2+1i", "--y", "1/3")
    assert first == second


def test_env_bits(capsys, monkeypatch):
    monkeypatch.setenv("POLYLOG_BITS", "128")
    code, out, _ = run(capsys, "d3", "--x", "1")
    assert code == 0 and "bits=128" in out
    assert body(out)[1].split()[1].startswith("1.2020569031595942853997381615")


def test_bad_env_bits(capsys, monkeypatch):
    monkeypatch.setenv("POLYLOG_BITS", "lots")
    assert run(capsys, "d2", "--x", "2")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("tame", "--f", "t$", "--g", "t", "--at", "0"),
        ("d2", "--x", "nonsense"),
        ("monodromy", "--word", "s7"),
        ("volume", "--points", "1,1,0,inf"),
        ("five-term", "--x", "2", "--y", "2"),
        ("steinberg", "--path", "/nonexistent/path.txt"),
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error:")


@pytest.mark.parametrize("exc,code", [(NonConvergenceError, 2), (PrecisionTooLowError, 2), (InvariantViolation, 3)])
def test_exit_codes_follow_exception_class(capsys, monkeypatch, exc, code):
    def boom(args, cfg):
        raise exc("forced")

    monkeypatch.setattr(cli, "cmd_tame", boom)
    assert run(capsys, "tame", "--f", "t", "--g", "t", "--at", "0")[0] == code


def test_path_commands(capsys, tmp_path):
    loop = tmp_path / "loop.txt"
    loop.write_text("basepoint 0.5 0\narc 0 0 0.5 0 2pi\n")
    code, out, _ = run(capsys, "itint", "--forms", "w0,w0", "--path", str(loop))
    assert code == 0 and "6.28318530717958647692528676656i" in out
    code, out, _ = run(capsys, "steinberg", "--path", str(loop))
    assert code == 0 and body(out)[1].split()[1] == "True"
    code, out, _ = run(capsys, "holonomy", "--f", "t", "--g", "t", "--path", str(loop))
    assert code == 0 and body(out)[-1].split() == ["exp(I/2pi", "i)", "-1.0"]


def test_bloch_wedge(capsys, tmp_path):
    combo = tmp_path / "combo.txt"
    combo.write_text("1 2\n-1 3\n")
    code, out, _ = run(capsys, "bloch-wedge", "--combo", str(combo))
    assert code == 0 and "wedge" in out


def test_volume_and_lie(capsys):
    code, out, _ = run(capsys, "volume", "--points", "0+1i,1,0,inf")
    assert code == 0 and "0.915965594177219015054603514932" in out
    code, out, _ = run(capsys, "lie-check", "--degree", "5", "--n", "3", "--format", "csv")
    assert code == 0 and body(out)[-1] == "5,6,5,1,True,True"


def test_selftest_suite(capsys):
    code, out, _ = run(capsys, "selftest", "--suite", "special-values")
    assert code == 0 and "PASS special-values" in out


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "polylogs.cli", "tame", "--f", "t+3", "--g", "t", "--at", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.splitlines()[-1] == "3"
