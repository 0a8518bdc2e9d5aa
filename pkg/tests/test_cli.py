"""CLI contract: commands, formats, exit codes, file outputs."""

import json

import pytest

from orbit_atlas.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ring_info_text(capsys):
    code, out, _ = run(capsys, "ring-info", "--ring", "Z/3^2")
    assert code == 0
    assert "q: 3" in out and "size: 9" in out
    assert "|J^1|=3" in out and "units: 6" in out


def test_ring_info_json(capsys):
    code, out, _ = run(capsys, "ring-info", "--ring", "GF(9)", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["q"] == 9 and data["n"] == 1
    assert data["radical_layers"]["|J^1|"] == 1
    assert data["modulus"] == "t^2+1"


def test_ring_info_rejects_even(capsys):
    code, _, err = run(capsys, "ring-info", "--ring", "Z/4^1")
    assert code == 2 and "odd prime" in err


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "ring-info", "--ring", "bogus")
    assert code == 2 and "error" in err


def test_census_both_field(capsys, warm_kernels):
    code, out, err = run(capsys, "census", "--ring", "Z/3^1", "--method", "both")
    assert code == 0
    assert "censuses equal" in err
    assert "scalar" in out


def test_census_both_z9_json(capsys, warm_kernels):
    code, out, err = run(capsys, "census", "--ring", "Z/3^2", "--method", "both", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert {"delta": 2, "type": "scalar", "orbit_size": 1, "orbit_count": 9} in rows
    assert sum(r["orbit_size"] * r["orbit_count"] for r in rows) == 6561


def test_census_discrepancy_witness(capsys, warm_kernels):
    code, out, err = run(
        capsys, "census", "--ring", "Z/3^2", "--method", "both", "--no-scalar-multiplicity"
    )
    assert code == 1
    assert "censuses differ" in err


def test_census_formula_only_large_ring(capsys):
    code, out, _ = run(capsys, "census", "--ring", "GF(121)", "--format", "csv")
    assert code == 0
    assert out.startswith("delta,type,orbit_size,orbit_count\n")


def test_census_budget_exceeded(capsys):
    code, _, err = run(capsys, "census", "--ring", "GF(121)", "--method", "brute")
    assert code == 2 and "budget" in err


def test_census_out_file_and_atlas(capsys, tmp_path, warm_kernels):
    out_file = tmp_path / "census.json"
    atlas_file = tmp_path / "z9.atlas.gz"
    code, _, _ = run(
        capsys,
        "census",
        "--ring",
        "Z/3^2",
        "--method",
        "both",
        "--format",
        "json",
        "--out",
        str(out_file),
        "--atlas",
        str(atlas_file),
    )
    assert code == 0
    text = out_file.read_text(encoding="utf-8")
    assert text.endswith("\n")
    assert len(json.loads(text)) == 7
    from orbit_atlas import read_atlas

    assert len(read_atlas(atlas_file).rows) == 153


def test_classify_matrix(capsys):
    code, out, _ = run(capsys, "classify", "--ring", "Z/3^2", "[[0,1],[0,0]]")
    assert code == 0
    rec = json.loads(out)
    assert rec["delta"] == 0 and rec["type"] == "ramified" and rec["orbit_size"] == 36
    assert rec["canonical"]["word"] == [{"kind": "L", "value": 1}]


def test_classify_split_example(capsys):
    code, out, _ = run(capsys, "classify", "--ring", "Z/3^2", "[[3,0],[0,6]]")
    assert code == 0
    rec = json.loads(out)
    assert rec["delta"] == 1 and rec["type"] == "split" and rec["orbit_size"] == 12


def test_classify_quaternion(capsys):
    code, out, _ = run(capsys, "classify", "--ring", "Z/3^1", "0+1*i+0*j+0*k")
    assert code == 0
    rec = json.loads(out)
    assert rec["matrix"] == "[[1,1],[1,2]]"
    assert rec["quaternion"] == "0+1*i+0*j+0*k"
    assert rec["type"] != "scalar" and rec["orbit_size"] > 1


def test_classify_scalar(capsys):
    code, out, _ = run(capsys, "classify", "--ring", "Z/3^2", "[[4,0],[0,4]]")
    assert code == 0
    rec = json.loads(out)
    assert rec["type"] == "scalar" and rec["orbit_size"] == 1 and "canonical" not in rec


def test_orbit_command(capsys, warm_kernels):
    code, out, _ = run(capsys, "orbit", "--ring", "Z/3^2", "[[3,0],[0,6]]")
    assert code == 0
    rec = json.loads(out)
    assert rec["orbit_size"] == 12 and rec["formula_size"] == 12 and rec["match"]


def test_factor_identity(capsys):
    code, out, _ = run(capsys, "factor", "--ring", "GF(3)", "[[1,0],[0,1]]")
    assert code == 0
    assert json.loads(out) == []


def test_factor_elementary(capsys):
    code, out, _ = run(capsys, "factor", "--ring", "GF(3)", "[[1,1],[0,1]]")
    assert code == 0
    assert json.loads(out) == [{"kind": "U", "value": 1}]


def test_factor_z9_word(capsys, z9):
    code, out, _ = run(capsys, "factor", "--ring", "Z/3^2", "[[4,1],[0,7]]")
    assert code == 0
    word = json.loads(out)
    assert 0 < len(word) <= 7
    from orbit_atlas import evaluate_word, mat, word_from_json

    assert evaluate_word(word_from_json(json.dumps(word)), z9) == mat(z9, 4, 1, 0, 7)


def test_factor_rejects_non_unipotent(capsys):
    code, _, err = run(capsys, "factor", "--ring", "GF(3)", "[[2,1],[1,1]]")
    assert code == 2 and "unipotent" in err


def test_iso_check_exhaustive(capsys):
    code, out, _ = run(capsys, "iso-check", "--ring", "Z/3^1")
    assert code == 0
    assert "exhaustive, 6561 pairs" in out


def test_iso_check_sampled(capsys):
    code, out, _ = run(capsys, "iso-check", "--ring", "Z/3^2", "--sample", "2000")
    assert code == 0
    assert "sampled, 2000 pairs" in out
    assert "bijectivity: ok (6561 elements, exhaustive)" in out


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--level", "quick")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert len(lines) == 16 and all(l.startswith("PASS") for l in lines)


def test_selftest_corruption_negative_control(capsys):
    code, out, _ = run(capsys, "selftest", "--level", "quick", "--inject-corruption")
    assert code == 1
    assert any(l.startswith("FAIL ring-axioms") for l in out.splitlines())


def test_cli_deterministic_output(capsys, warm_kernels):
    runs = []
    for _ in range(2):
        code, out, _ = run(capsys, "census", "--ring", "Z/3^2", "--method", "both", "--format", "json")
        assert code == 0
        runs.append(out)
    assert runs[0] == runs[1]


def test_on_demand_ring_paths(capsys):
    """Rings above the table threshold still serve ring-info, census
    formulas, and classification through the coefficient arithmetic."""
    code, out, _ = run(capsys, "ring-info", "--ring", "Z/3^7", "--format", "json")
    assert code == 0
    assert json.loads(out)["size"] == 2187
    code, out, _ = run(capsys, "classify", "--ring", "Z/3^7", "[[9,0],[0,18]]")
    assert code == 0
    rec = json.loads(out)
    # delta = val(9 - 18) = 2; residue discriminant is a nonzero square
    assert rec["delta"] == 2 and rec["type"] == "split"
    assert rec["orbit_size"] == 3**9 * 4
    code, out, _ = run(capsys, "census", "--ring", "GR(27,3)", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    q, n = 27, 3
    assert sum(r["orbit_size"] * r["orbit_count"] for r in rows) == q ** (4 * n)


def test_threads_env_fallback(monkeypatch):
    monkeypatch.setenv("ORBIT_ATLAS_THREADS", "3")
    from orbit_atlas.cli import build_parser

    args = build_parser().parse_args(["census", "--ring", "Z/3^2"])
    assert args.threads == 3


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
