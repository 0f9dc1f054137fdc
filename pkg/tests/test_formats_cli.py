import json

import pytest

from pbflab import formats, verify
from pbflab.boolfn import UNDEF, PartialFunction
from pbflab.cli import main
from pbflab.polynomials import FOURIER, MultilinearPoly


def test_pbf_table_form():
    f = formats.parse_pbf_text("n 2\ntable 0001\n")
    assert f.n == 2 and f.evaluate(0b11) == 1 and f.evaluate(0) == 0


def test_pbf_point_form_and_comments():
    text = "# dictator fragment\nn 3\npoint 100 1\n"
    f = formats.parse_pbf_text(text)
    assert f.evaluate(0b001) == 1
    assert all(f.evaluate(x) == UNDEF for x in range(8) if x != 1)


def test_pbf_roundtrip_canonical():
    f = PartialFunction(3, bytes([0, 1, UNDEF, 1, 0, UNDEF, 0, 1]))
    text = formats.serialize_pbf(f)
    assert formats.parse_pbf_text(text) == f
    assert formats.serialize_pbf(formats.parse_pbf_text(text)) == text


def test_pbf_errors_carry_line_numbers():
    with pytest.raises(formats.FormatError) as err:
        formats.parse_pbf_text("n 2\ntable 001\n")
    assert "line 2" in str(err.value)
    with pytest.raises(formats.FormatError):
        formats.parse_pbf_text("table 0001\n")
    with pytest.raises(formats.FormatError):
        formats.parse_pbf_text("n 25\n")
    with pytest.raises(formats.FormatError):
        formats.parse_pbf_text("n 2\npoint 11 1\npoint 11 0\n")


def test_poly_roundtrip():
    p = MultilinearPoly(3, FOURIER, {0: 0.5, 0b101: -0.25})
    text = formats.serialize_poly(p)
    q = formats.parse_poly_text(text)
    assert q.n == p.n and q.basis == p.basis and q.coeffs == p.coeffs
    assert formats.serialize_poly(q) == text


def test_dimacs_roundtrip():
    text = "c example\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n"
    cnf = formats.parse_dimacs_text(text)
    assert cnf.num_vars == 3 and cnf.clauses == ((1, -2, 3), (-1, 2, -3))
    again = formats.parse_dimacs_text(formats.serialize_dimacs(cnf))
    assert again == cnf
    with pytest.raises(formats.FormatError):
        formats.parse_dimacs_text("p cnf 2 1\n1 -3 0\n")


def test_pf_instance_json_roundtrip(tmp_path):
    from pbflab.perturbation import PerturbationInstance

    inst = PerturbationInstance(
        t=1,
        p_values=(1.0, -2.0),
        q_values=((0.5, 0.25),),
        epsilon=1.0,
        box_bound=2.0,
        origin="sat-reduced",
    )
    path = tmp_path / "inst.json"
    formats.save_pf_instance(inst, path)
    again = formats.load_pf_instance(path)
    assert again == inst


def test_cli_measures_and_adeg(tmp_path, capsys):
    pbf = tmp_path / "f.pbf"
    pbf.write_text("n 2\ntable 0001\n")
    assert main(["measures", str(pbf), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["depth"] == 2 and payload["bs"] == 2
    assert main(["adeg", str(pbf), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["adeg"] == 1 and payload["exact_degree"] == 2


def test_cli_symmetric_slice_complete(tmp_path, capsys):
    assert main(["symmetric", "--profile", "0:0,2:1,4:0", "--n", "4", "--verify-d", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["gap"] == 2 and payload["formula_matches"]

    pbf = tmp_path / "slice.pbf"
    pbf.write_text("n 3\npoint 100 1\npoint 010 0\npoint 001 0\n")
    assert main(["slice", str(pbf), "--verify-bound", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["all_correct"]

    assert main(["complete", str(pbf), "--measure", "D", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["exact"] and payload["value"] == 1


def test_cli_admissible(tmp_path, capsys):
    pbf = tmp_path / "f.pbf"
    table = ["0"] * 64
    table[37] = "*"
    pbf.write_text("n 6\ntable " + "".join(table) + "\n")
    poly = tmp_path / "p.poly"
    poly.write_text("n 6\nbasis fourier\n000000 0.8333333333333334\n110000 0.08333333333333333\n")
    assert main(["admissible", str(pbf), str(poly), "--c", "1", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["criteria"]["lipschitz"] and payload["implication_ok"]


def test_cli_pf_pipeline(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 3 1\n1 2 3 0\n")
    out = tmp_path / "inst.json"
    assert main(["pf-reduce", str(cnf), "--out", str(out), "--json"]) == 0
    capsys.readouterr()
    assert main(["pf-solve", str(out), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["decision"] == "YES"


def test_cli_verify_and_exit_codes(capsys):
    assert main(["verify", "--suite", "s4-slice", "--instances", "4", "--seed", "1", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["pass"] and payload["schema"] == 1


def test_cli_unknown_suite(capsys):
    assert main(["verify", "--suite", "nope"]) == 2


def test_verify_reports_deterministic_and_parallel():
    a = verify.report_to_json(verify.run_suite("s4-symmetric", instances=12, seed=5))
    b = verify.report_to_json(verify.run_suite("s4-symmetric", instances=12, seed=5))
    c = verify.report_to_json(
        verify.run_suite("s4-symmetric", instances=12, seed=5, jobs=2)
    )
    assert a == b == c


def test_verify_failure_artifacts(tmp_path, monkeypatch):
    # force a failing verdict to confirm the replay artifact drops out
    from pbflab import verify as v

    def broken(index, cfg):
        return {
            "id": index,
            "params": {},
            "verdicts": {"forced": False},
            "pass": False,
            "pbf": "n 1\ntable 01\n",
        }

    monkeypatch.setitem(v._SUITE_IMPL, "s4-slice", (broken, 2))
    rep = v.run_suite("s4-slice", instances=1, artifact_dir=str(tmp_path))
    assert not rep["pass"]
    assert (tmp_path / "replay_s4-slice_0.pbf").exists()
    assert (tmp_path / "replay_s4-slice_0.json").exists()
