import io
import json
import os
import subprocess
import sys

import pytest

from bidisc_spectra import cli
from bidisc_spectra.regions import from_json

GOLDEN = 2.399963229728653

BASE = {
    "phi": {"kind": "rotation", "angle": {"rational": [0, 1]}},
    "psi": {"kind": "rotation", "angle": {"irrational": GOLDEN}},
    "weight": "3 + z2",
    "oracle": {"grid": 16, "n_max": 32, "horizon": 16},
}


def write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify(tmp_path, capsys):
    code, out, _ = run(["classify", write(tmp_path, BASE)], capsys)
    assert code == cli.EXIT_OK
    first, second = out.splitlines()
    assert first == "EE-rat-irr p=1"
    assert json.loads(second)["case"] == "EE-rat-irr"


def test_spectrum_stdout_and_svg(tmp_path, capsys):
    svg = tmp_path / "out.svg"
    code, out, _ = run(["spectrum", write(tmp_path, BASE), "--svg", str(svg)], capsys)
    assert code == 0
    rep = from_json(out.strip())
    assert rep.sigma.primitives[0].r == 3.0
    assert svg.read_text().startswith("<?xml")


def test_spectrum_json_output_file(tmp_path, capsys):
    target = tmp_path / "rep.json"
    doc = dict(BASE, output={"json": str(target)})
    code, out, _ = run(["spectrum", write(tmp_path, doc)], capsys)
    assert code == 0 and out == ""
    first = target.read_text()
    run(["spectrum", write(tmp_path, doc)], capsys)
    assert target.read_text() == first  # byte-identical reruns
    assert not [p for p in os.listdir(tmp_path) if p.startswith(".tmp-")]


def test_verify_ok(tmp_path, capsys):
    code, out, _ = run(["verify", write(tmp_path, BASE)], capsys)
    assert code == cli.EXIT_OK
    assert "all checks agree" in out
    assert out.splitlines()[1].split()[:2] == ["quantity", "closed_form"]


def test_verify_disagreement_exit_code(tmp_path, capsys):
    # Jensen-gap configuration: the closed form is not the true radius
    doc = dict(BASE, phi=BASE["psi"], psi=BASE["phi"], weight="z1 - 0.5")
    code, out, _ = run(["verify", write(tmp_path, doc)], capsys)
    assert code == cli.EXIT_DISAGREE
    assert "jensen_gap" in out


@pytest.mark.parametrize(
    "doc, fragment",
    [
        (dict(BASE, colour="red"), "unknown key(s) colour"),
        (dict(BASE, oracle={"grid": 16, "speed": 2}), "oracle: unknown key(s) speed"),
        (dict(BASE, phi={"kind": "rotation", "angle": {"rational": [1, 2]}, "extra": 1}), "phi: unknown key(s) extra"),
        (dict(BASE, weight="3 + z3"), "weight: at position 4"),
        (dict(BASE, weight="z1 - z1"), "identically zero"),
        (dict(BASE, oracle={"n_max": 100}), "power of two"),
        (dict(BASE, swap="yes"), "swap: expected a boolean"),
        (dict(BASE, relation="dependent"), "relation:"),
        ({"phi": BASE["phi"]}, "missing key psi"),
        (dict(BASE, psi={"kind": "hyperbolic", "a": 1.5}), "psi:"),
        (dict(BASE, psi={"kind": "rotation"}), "psi:"),
    ],
)
def test_config_errors(tmp_path, capsys, doc, fragment):
    code, _, err = run(["classify", write(tmp_path, doc)], capsys)
    assert code == cli.EXIT_CONFIG
    assert fragment in err


def test_bad_json_and_missing_file(tmp_path, capsys):
    code, _, err = run(["classify", write(tmp_path, "{not json")], capsys)
    assert code == cli.EXIT_CONFIG and "invalid JSON" in err
    code, _, err = run(["classify", str(tmp_path / "nope.json")], capsys)
    assert code == cli.EXIT_CONFIG


def test_unsupported_exit_code(tmp_path, capsys):
    doc = dict(BASE, phi={"kind": "rotation", "angle": {"irrational": 1.0}}, swap=True)
    code, _, err = run(["spectrum", write(tmp_path, doc)], capsys)
    assert code == cli.EXIT_UNSUPPORTED
    assert "unsupported" in err


def test_inconclusive_exit_code(tmp_path, capsys, monkeypatch):
    from bidisc_spectra.errors import Inconclusive

    def boom(*a, **k):
        raise Inconclusive("undecided")

    monkeypatch.setattr(cli, "compute_report", boom)
    code, _, err = run(["spectrum", write(tmp_path, BASE)], capsys)
    assert code == cli.EXIT_INCONCLUSIVE and "undecided" in err


def test_atomic_write_keeps_old_file_on_failure(tmp_path, monkeypatch):
    target = tmp_path / "x.txt"
    target.write_text("old")

    def fail(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", fail)
    with pytest.raises(OSError):
        cli.atomic_write(str(target), "new")
    assert target.read_text() == "old"
    assert os.listdir(tmp_path) == ["x.txt"]


def test_seed_env(monkeypatch):
    monkeypatch.setenv("SPECTRA_SEED", "42")
    assert cli._seed() == 42
    monkeypatch.setenv("SPECTRA_SEED", "x")
    with pytest.raises(cli.ConfigError):
        cli._seed()
    monkeypatch.delenv("SPECTRA_SEED")
    assert cli._seed() == cli.DEFAULT_SEED


def test_selftest_reports_failures(monkeypatch):
    from bidisc_spectra import acceptance

    ok = acceptance.CriterionResult("a", True, "fine", 0.0)
    bad = acceptance.CriterionResult("b", False, "broken", 0.0)
    monkeypatch.setattr(acceptance, "run_all", lambda **kw: [ok, bad])
    buf = io.StringIO()
    assert cli.cmd_selftest(out=buf) == cli.EXIT_FAIL
    assert "1/2 criteria ok" in buf.getvalue()
    monkeypatch.setattr(acceptance, "run_all", lambda **kw: [ok])
    assert cli.cmd_selftest(out=io.StringIO()) == cli.EXIT_OK


def test_console_entry_point(tmp_path):
    cfg = write(tmp_path, BASE)
    res = subprocess.run([sys.executable, "-m", "bidisc_spectra.cli", "classify", cfg], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("EE-rat-irr p=1")
