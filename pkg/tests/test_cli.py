import csv
import io
import json
import os

import jsonschema
import pytest

from lichnerowicz import cli, harmonic


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_json_functions(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "3", "--p", "0", "--k-max", "2", "--format", "json")
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    jsonschema.validate(doc, cli.SPECTRUM_SCHEMA)
    assert [(l["eigenvalue"], l["multiplicity"]) for l in doc["lines"]] == [(0, 1), (3, 4), (8, 9)]


def test_spectrum_n2_text_shows_formula_columns(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "2", "--p", "2", "--k-max", "1", "--format", "text")
    assert code == cli.EXIT_OK
    header = out.splitlines()[1]
    assert "formula" in header and "flag" in header
    assert "MISMATCH" in out and "skipped:" in out


def test_spectrum_variants_agree_for_one_tensors(capsys):
    base = ["spectrum", "--n", "3", "--p", "1", "--k-max", "4", "--format", "json"]
    _, sym, _ = run(capsys, *base, "--variant", "symmetric")
    _, frm, _ = run(capsys, *base, "--variant", "forms")
    strip = lambda doc: [(l["eigenvalue"], l["multiplicity"], l["complete"]) for l in json.loads(doc)["lines"]]
    assert strip(sym) == strip(frm)


@pytest.mark.parametrize("argv", [
    ["spectrum", "--n", "2", "--p", "1", "--k-max", "3"],
    ["spectrum", "--n", "4", "--p", "2", "--k-max", "1", "--computed"],
    ["spectrum", "--n", "2", "--p", "1", "--k-max", "3", "--variant", "forms"],
])
def test_spectrum_documents_validate(capsys, argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == cli.EXIT_OK
    jsonschema.validate(json.loads(out), cli.SPECTRUM_SCHEMA)


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "3", "--p", "0", "--k-max", "1", "--format", "csv")
    assert code == cli.EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == cli.SPECTRUM_CSV_COLUMNS
    assert rows[1] == ["0", "1", "true", "", "false", "V(k=0,q=0,l=0):1"]


def test_dims_computed_all_match(capsys):
    code, out, _ = run(capsys, "dims", "--n", "3", "--p", "2", "--k", "2", "--computed", "--format", "json")
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    jsonschema.validate(doc, cli.DIMS_SCHEMA)
    assert {r["kind"] for r in doc["rows"]} == {"PolyFull", "Hdelta", "Hdelta0", "Hdelta0KerDstar",
                                                "Hdelta0KerIr"}
    assert all(r["match"] is True for r in doc["rows"])


def test_dims_csv_and_forms(capsys):
    code, out, _ = run(capsys, "dims", "--n", "3", "--p", "1", "--k", "2", "--variant", "forms",
                       "--computed", "--format", "csv")
    assert code == cli.EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == cli.DIMS_CSV_COLUMNS
    assert [r[0] for r in rows[1:]] == ["FormsHk", "FormsKerIr", "FormsExact"]
    assert all(r[3] == "true" for r in rows[1:])


def test_dims_mismatch_exits_with_failure(capsys, monkeypatch):
    real = harmonic.dim_formula
    monkeypatch.setattr(harmonic, "dim_formula", lambda tag: (real(tag) or 0) + 1)
    code, out, _ = run(capsys, "dims", "--n", "3", "--p", "1", "--k", "1", "--computed")
    assert code == cli.EXIT_FAIL
    assert "False" in out


def test_basis_rotations(capsys):
    code, out, _ = run(capsys, "basis", "--n", "2", "--p", "1", "--k", "1", "--space", "Hd0KerIr",
                       "--format", "json")
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    jsonschema.validate(doc, cli.BASIS_SCHEMA)
    assert doc["dim"] == 3
    for vec in doc["basis"]:
        # x_i dx_j - x_j dx_i: two terms, opposite unit coefficients
        assert len(vec) == 2
        assert sorted(t["coefficient"] for t in vec) == ["-1", "1"]
        (a, b) = vec
        assert a["index"][0] == b["exponents"].index(1) and b["index"][0] == a["exponents"].index(1)


def test_basis_formats(capsys):
    argv = ["basis", "--n", "2", "--p", "2", "--k", "1", "--space", "V", "--q", "1", "--l", "0"]
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == cli.EXIT_OK
    jsonschema.validate(json.loads(out), cli.BASIS_SCHEMA)
    code, out, _ = run(capsys, *argv, "--format", "csv")
    assert code == cli.EXIT_OK and out.startswith("vector,index,exponents,coefficient\n")
    code, out, _ = run(capsys, *argv)
    assert code == cli.EXIT_OK and out.startswith("# ")


def test_basis_cache_format_round_trips(capsys):
    code, out, _ = run(capsys, "basis", "--n", "2", "--p", "1", "--k", "1", "--space", "Hd0KerIr",
                       "--format", "cache")
    assert code == cli.EXIT_OK
    tag = harmonic.SpaceTag(harmonic.Kind.Hdelta0KerIr, 2, 1, 1)
    assert harmonic.BasisCache.serialize(tag, harmonic.build_space(tag).subspace) == out


@pytest.mark.parametrize("argv", [
    ["spectrum", "--n", "1", "--p", "0", "--k-max", "1"],
    ["spectrum", "--n", "3", "--p", "-1", "--k-max", "1"],
    ["spectrum", "--n", "3", "--p", "0", "--k-max", "-1"],
    ["spectrum", "--n", "2", "--p", "3", "--k-max", "1", "--variant", "forms"],
    ["dims", "--n", "3", "--p", "1", "--k", "-2"],
    ["basis", "--n", "2", "--p", "1", "--k", "1", "--space", "Nope"],
    ["basis", "--n", "2", "--p", "1", "--k", "1", "--space", "V"],
    ["basis", "--n", "2", "--p", "1", "--k", "0", "--space", "V", "--q", "1", "--l", "0"],
    ["basis", "--n", "2", "--p", "1", "--k", "1", "--space", "V", "--q", "0", "--l", "0", "--format", "cache"],
    ["verify", "--suite", "eigen"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == cli.EXIT_USAGE
    assert out == "" and "error" in err


@pytest.mark.parametrize("argv", [["bogus"], ["spectrum", "--n", "3"]])
def test_parser_errors_exit_with_usage_code(capsys, argv):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == cli.EXIT_USAGE


def test_internal_errors(capsys, monkeypatch):
    def boom(*a, **kw):
        raise AssertionError("non-integer eigenvalue")
    monkeypatch.setattr(cli, "spectrum_document", boom)
    code, _, err = run(capsys, "spectrum", "--n", "3", "--p", "0", "--k-max", "1")
    assert code == cli.EXIT_INTERNAL and "internal error" in err


def test_verify_eigen_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "eigen", "--n", "3", "--p", "2", "--k-max", "3",
                       "--format", "json")
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    jsonschema.validate(doc, cli.VERIFY_SCHEMA)
    assert doc["passed"] is True


def test_verify_forms_text(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "eigen", "--n", "2", "--p", "1", "--k-max", "2",
                       "--variant", "forms")
    assert code == cli.EXIT_OK
    assert out.startswith("suite eigen") and "FAIL" not in out


def test_verify_failure_exits_2(capsys, monkeypatch):
    from lichnerowicz import verify

    real = verify.run_structural_suite

    def small(*a, **kw):
        return real(ns=(2,), ps=(2,), ks=(1,), checks=["metric_blocks"])
    monkeypatch.setattr(verify, "run_structural_suite", small)
    code, out, _ = run(capsys, "verify", "--suite", "structural", "--format", "json")
    assert code == cli.EXIT_FAIL
    doc = json.loads(out)
    jsonschema.validate(doc, cli.VERIFY_SCHEMA)
    assert doc["passed"] is False


def test_out_is_written_atomically(capsys, tmp_path):
    target = tmp_path / "spectrum.json"
    code, out, _ = run(capsys, "spectrum", "--n", "3", "--p", "0", "--k-max", "2", "--format", "json",
                       "--out", str(target))
    assert code == cli.EXIT_OK and out == ""
    assert os.listdir(tmp_path) == ["spectrum.json"]
    jsonschema.validate(json.loads(target.read_text()), cli.SPECTRUM_SCHEMA)


def test_unwritable_out(capsys, tmp_path):
    blocker = tmp_path / "plain"
    blocker.write_text("")
    target = blocker / "spectrum.json"
    code, _, err = run(capsys, "spectrum", "--n", "3", "--p", "0", "--k-max", "1", "--out", str(target))
    assert code != cli.EXIT_OK and "cannot write" in err
    assert not target.exists()


def test_cache_dir_flag(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(harmonic, "_DEFAULT", {"cache": None, "resolved": False})
    argv = ["--cache-dir", str(tmp_path), "basis", "--n", "2", "--p", "2", "--k", "1", "--space", "Hd0KerIr",
            "--format", "json"]
    code, first, _ = run(capsys, *argv)
    assert code == cli.EXIT_OK and os.listdir(tmp_path)
    code, second, _ = run(capsys, *argv)
    assert first == second


def test_same_config_same_bytes(capsys):
    argv = ["spectrum", "--n", "2", "--p", "2", "--k-max", "2", "--format", "json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
