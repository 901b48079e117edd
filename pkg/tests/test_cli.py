import json
import subprocess
import sys
from pathlib import Path

import pytest

from voronoiforms import cli
from voronoiforms import dataset as D
from voronoiforms.qform import QuadraticForm, format_form

FORMS = Path(__file__).resolve().parent.parent / "forms"


@pytest.fixture
def form_file(tmp_path):
    def write(Q_or_text, name="q.txt"):
        p = tmp_path / name
        p.write_text(Q_or_text if isinstance(Q_or_text, str) else format_form(Q_or_text))
        return str(p)
    return write


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_minima_i2(form_file, capsys):
    code, out, _ = run(["minima", form_file(QuadraticForm.identity(2)), "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["min"] == "1" and data["count"] == 4


def test_minima_pi_e6(capsys):
    code, out, _ = run(["minima", str(FORMS / "pi_e6.txt"), "--json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["count"] == 72


def test_exit_codes(form_file, capsys):
    assert run(["minima", form_file("2\n1 2\n3 1\n")], capsys)[0] == 2
    assert run(["minima", "/nonexistent/form.txt"], capsys)[0] == 2
    assert run(["minima", form_file("2\n1 2\n2 1\n")], capsys)[0] == 3
    assert run(["scan", form_file("2\n1 2\n2 1\n"), form_file("2\n1 0\n0 1\n", "b.txt")], capsys)[0] == 3
    assert run(["nonsense"], capsys)[0] == 2
    assert run(["minima", form_file(QuadraticForm.identity(2)), "--jobs", "0"], capsys)[0] == 2


def test_scan_flip_pair(capsys):
    code, out, _ = run(["scan", str(FORMS / "a2.txt"), str(FORMS / "a2_flip.txt"), "--json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["breakpoints"] == ["1/2"]
    assert [i["t"] for i in data["intervals"]] == ["0", "(0,1/2)", "1/2", "(1/2,1)", "1"]


def test_scan_constant(capsys):
    code, out, _ = run(["scan", str(FORMS / "a2.txt"), str(FORMS / "a2.txt"), "--json"], capsys)
    assert json.loads(out)["breakpoints"] == []


def test_rationals_are_strings(capsys):
    code, out, _ = run(["dataset", "dump", "--json"], capsys)
    data = json.loads(out)

    def walk(x):
        if isinstance(x, float):
            raise AssertionError("float in payload")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)
    walk(data)
    assert any("/" in x for row in data["forms"]["phi_E6_star"] for x in row)


def test_output_is_deterministic(tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"o{i}.json"
        subprocess.run([sys.executable, "-m", "voronoiforms.cli", "star", str(FORMS / "a2.txt"), "--json", "--out", str(p)],
                       check=True)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_star_export(capsys):
    code, out, _ = run(["star", str(FORMS / "i2.txt"), "--export"], capsys)
    assert code == 0 and out.startswith("star n=2 cells=4")


def test_other_subcommands(capsys):
    assert json.loads(run(["perfect", str(FORMS / "a2.txt"), "--json"], capsys)[1])["perfect"] is True
    assert json.loads(run(["eutaxy", str(FORMS / "a2.txt"), "--json"], capsys)[1])["uniform"] is True
    assert json.loads(run(["autgroup", str(FORMS / "a2.txt"), "--json"], capsys)[1])["order"] == 12
    data = json.loads(run(["commensurate", str(FORMS / "a2.txt"), str(FORMS / "a2_flip.txt"), "--json"], capsys)[1])
    assert data["commensurate"] is False and "witness" in data


def test_eutaxy_domain_error(form_file, capsys):
    assert run(["eutaxy", form_file("2\n1 0\n0 2\n")], capsys)[0] == 3


def test_dataset_verify_and_corruption(capsys):
    code, out, _ = run(["dataset", "verify"], capsys)
    assert code == 1 and "FAIL  printed P_R" in out
    code, out, _ = run(["dataset", "verify", "--corrupt", "U_STAR_INV"], capsys)
    assert code == 1 and "FAIL  U* U*^-1 = I" in out


def test_reproduce_corruption_hook(monkeypatch, capsys):
    monkeypatch.setattr(cli, "_SECTIONS", [("D",)])
    code, out, _ = run(["reproduce", "--corrupt", "F_E6"], capsys)
    assert code == 1
    assert "FAIL  U*^T P_E6 U* = F_E6" in out and "failing:" in out
    code, out, _ = run(["reproduce", "--corrupt", "F_E6", "--json"], capsys)
    data = json.loads(out)
    assert data["passed"] is False


def test_forms_directory_matches_dataset():
    from voronoiforms.qform import parse_form

    assert parse_form((FORMS / "phi_e6.txt").read_text()) == D.PHI_E6
    assert parse_form((FORMS / "pi_e6_star.txt").read_text()) == D.PI_E6_STAR
