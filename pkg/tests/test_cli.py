"""CLI: thin composition over the library, with documented exit codes."""

import json

from pytest import approx

from cellca import (CellSet, ReconstitutionConfig, dump_solution, fit_ca,
                    reconstitute, write_solution)
from cellca.cli import main
from conftest import DATA_DIR

CAR = str(DATA_DIR / "car.csv")
OCEAN = str(DATA_DIR / "ocean_plastic.csv")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fit(capsys, car_table):
    code, out, _ = run(capsys, "fit", "--input", CAR)
    assert code == 0
    doc = json.loads(out)
    assert doc["sigma"][0] == approx(0.335, abs=2e-3)
    assert doc["sigma"][1] == approx(0.281, abs=2e-3)
    # byte-for-byte what the library itself produces
    assert out.rstrip("\n") == dump_solution(write_solution(car_table, fit_ca(car_table)))


def test_fit_to_file(tmp_path, capsys):
    out_path = tmp_path / "sol.json"
    code, out, _ = run(capsys, "fit", "--input", CAR, "--output", str(out_path))
    assert code == 0
    assert out == ""
    assert json.loads(out_path.read_text())["rank"] == 6


def test_reconstitute(capsys, car_table):
    code, out, err = run(capsys, "reconstitute", "--input", CAR,
                         "--cell", "Volvo:Safety", "--order", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["reconstitution"]["cells"][0]["value"] == approx(27.0, abs=0.5)
    assert doc["sigma"][:2] == approx([0.334, 0.186], abs=2e-3)
    cells = CellSet.from_labels(car_table, [("Volvo", "Safety")])
    res = reconstitute(car_table, cells, ReconstitutionConfig(order=2))
    assert out.rstrip("\n") == dump_solution(
        write_solution(res.table, res.solution, reconstitution=res))


def test_reconstitute_fallback_advisory(capsys):
    code, out, err = run(capsys, "reconstitute", "--input", OCEAN,
                         "--cell", "17:Resp.C.I", "--cell", "59:Resp.C.I",
                         "--order", "2")
    assert code == 0
    assert "advisory:" in err
    doc = json.loads(out)
    assert doc["reconstitution"]["fallback_applied"] is True


def test_reconstitute_negative_error_exit(capsys):
    code, out, err = run(capsys, "reconstitute", "--input", OCEAN,
                         "--cell", "17:Resp.C.I", "--cell", "59:Resp.C.I",
                         "--order", "2", "--negative-policy", "error")
    assert code == 1
    payload = json.loads(err)
    assert payload["error"] == "NegativeImputation"
    assert payload["value"] == approx(-0.0006, abs=5e-4)


def test_malformed_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "empty.csv"
    bad.write_text("")
    code, _, err = run(capsys, "fit", "--input", str(bad))
    assert code == 2
    assert json.loads(err)["error"] == "ParseError"


def test_unknown_label_exits_2(capsys):
    code, _, err = run(capsys, "reconstitute", "--input", CAR,
                       "--cell", "Batmobile:Safety")
    assert code == 2
    assert json.loads(err)["error"] == "UnknownLabel"


def test_bad_cell_spec_exits_2(capsys):
    code, _, err = run(capsys, "reconstitute", "--input", CAR, "--cell", "Volvo")
    assert code == 2


def test_supplementary(capsys):
    code, out, _ = run(capsys, "supplementary", "--input", CAR,
                       "--sup-row", "Volvo", "--sup-col", "Safety")
    assert code == 0
    doc = json.loads(out)
    assert doc["sigma"][0] == approx(0.350, abs=2e-3)
    assert doc["supplementary"]["sup_rows"] == ["Volvo"]


def test_degenerate_reduction_exits_1(tmp_path, capsys):
    path = tmp_path / "t.csv"
    path.write_text(",a,b,c\nr1,1,2,3\nr2,0,5,0\nr3,2,1,1\n")
    code, _, err = run(capsys, "supplementary", "--input", str(path), "--sup-col", "b")
    assert code == 1
    assert json.loads(err)["error"] == "DegenerateReduction"


def test_diagnose(capsys):
    code, out, err = run(capsys, "diagnose", "--input", CAR, "--top", "1")
    assert code == 0
    assert "Volvo" in err
    doc = json.loads(out)
    assert doc["diagnostics"]["top_n"] == 1
    assert doc["diagnostics"]["cells"][0]["share_pct"] == 17.7


def test_render(tmp_path, capsys):
    out_path = tmp_path / "map.svg"
    code, _, _ = run(capsys, "render", "--input", CAR, "--kind", "symmetric",
                     "--dims", "1,2", "--output", str(out_path))
    assert code == 0
    svg = out_path.read_text()
    assert svg.startswith("<svg ")
    assert "Volvo" in svg


def test_render_bad_dims(capsys):
    code, _, err = run(capsys, "render", "--input", CAR, "--dims", "1,99")
    assert code == 2
    assert json.loads(err)["error"] == "IndexError"
