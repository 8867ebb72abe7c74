"""End-to-end checks of the command-line surface."""

import json
import os
import subprocess
import sys
from fractions import Fraction

from latmass.cli import main
from latmass.solver import genus_mass


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_coeff_root_system(capsys):
    data = run_json(capsys, "coeff", "A2", "--dim", "8")
    assert data["kind"] == "coefficient"
    assert data["rows"] == [{"form": "A2", "dim": 8, "coefficient": "13440"}]


def test_coeff_weight_twelve(capsys):
    data = run_json(capsys, "coeff", "A1", "--dim", "24")
    assert Fraction(data["rows"][0]["coefficient"]) == Fraction(65520, 691)


def test_coeff_gram_matches_root_system(capsys, tmp_path):
    path = tmp_path / "a2.json"
    path.write_text("[[2,1],[1,2]]")
    data = run_json(capsys, "coeff", str(path), "--dim", "8")
    assert data["rows"][0]["coefficient"] == "13440"


def test_mass_dim8(capsys):
    code, out, _ = run(capsys, "mass", "--dim", "8", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "root_system,mass,mass_times_weyl,decimal"
    assert lines[1:] == ["E8,1/696729600,1,1"]


def test_mass_all_includes_zero_rows(capsys):
    code, out, _ = run(capsys, "mass", "--dim", "8", "--all", "--format", "tsv")
    assert code == 0
    lines = out.strip().splitlines()[1:]
    assert len(lines) == 79
    nonzero = [line for line in lines if line.split("\t")[1] != "0"]
    assert len(nonzero) == 1 and nonzero[0].startswith("E8\t")


def test_mass_coefficient_mode(capsys):
    data = run_json(capsys, "mass", "--dim", "32", "--max-rank", "0")
    assert data["kind"] == "coefficients"
    assert data["rows"] == [{"root_system": "0", "coefficient": "1", "decimal": "1"}]


def test_mass_json_round_trips_exactly(capsys):
    data = run_json(capsys, "mass", "--dim", "16", "--verify")
    total = sum(Fraction(row["mass"]) for row in data["rows"])
    assert total == genus_mass(16) == Fraction(data["genus_mass"])


def test_emb(capsys):
    code, out, _ = run(capsys, "emb", "A1^2", "E8", "--format", "tsv")
    assert code == 0
    assert out.strip().splitlines() == ["source\ttarget\tcount", "A1^2\tE8\t30240"]


def test_siegel_example(capsys):
    data = run_json(capsys, "siegel", "--p", "2", "--gram", "(4)", "--x", "1/16")
    row = data["rows"][0]
    assert row["polynomial"] == "1 2 4"
    assert row["value"] == "73/64"


def test_siegel_polynomial_only(capsys):
    data = run_json(capsys, "siegel", "--p", "3", "--gram", "(6)")
    row = data["rows"][0]
    assert row["polynomial"] == "1 3"
    assert row["value"] == ""
    # binary quadratic form of determinant 3: the linear term vanishes
    data = run_json(capsys, "siegel", "--p", "3", "--gram", "(2 1; 1 2)")
    assert data["rows"][0]["polynomial"] == "1"


def test_reduce_and_bounds_from_saved_table(capsys, tmp_path, table24):
    table, _ = table24
    path = tmp_path / "dim24.json"
    table.save(str(path))

    data = run_json(capsys, "reduce", "--from-table", str(path), "--dim", "0")
    assert data["rows"] == [
        {"dimension": 0, "root_system": "0", "mass": "1", "decimal": "1"}
    ]

    data = run_json(capsys, "bounds", "--from-table", str(path), "--dim", "22")
    assert data["rows"] == [
        {
            "dimension": 22,
            "base": 24,
            "genus": "odd",
            "bound": 68,
            "root_system_count": 68,
        }
    ]


def test_bounds_even_genus(capsys):
    code, out, _ = run(capsys, "bounds", "--dim", "16", "--format", "csv")
    assert code == 0
    assert out.strip().splitlines()[1] == "16,16,even,2,2"


def test_cache_reuse(capsys, tmp_path):
    cache = str(tmp_path / "cache")
    code, _, _ = run(capsys, "mass", "--dim", "8", "--cache", cache)
    assert code == 0
    assert os.path.exists(os.path.join(cache, "masses_dim8.json"))
    code, _, err = run(capsys, "mass", "--dim", "8", "--cache", cache)
    assert code == 0
    assert "loaded cached table" in err


def test_cache_env_variable(capsys, tmp_path, monkeypatch):
    cache = str(tmp_path / "envcache")
    monkeypatch.setenv("LATTICE_MASS_CACHE", cache)
    code, _, _ = run(capsys, "mass", "--dim", "8")
    assert code == 0
    assert os.path.exists(os.path.join(cache, "masses_dim8.json"))


def test_checkpoint_cleanup(capsys, tmp_path):
    cache = str(tmp_path / "ck")
    code, _, _ = run(
        capsys, "mass", "--dim", "16", "--cache", cache, "--checkpoint-every", "20"
    )
    assert code == 0
    assert not os.path.exists(os.path.join(cache, "solve_dim16.ckpt.json"))


def test_verify_subcommand(capsys):
    code, out, err = run(capsys, "verify", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()[1:]
    assert len(lines) == 5
    assert all(",pass," in line for line in lines)
    assert err.count("pass:") == 5


def test_config_errors_exit_2(capsys):
    assert run(capsys, "mass", "--dim", "12")[0] == 2
    assert run(capsys, "coeff", "E9", "--dim", "8")[0] == 2
    assert run(capsys, "coeff", "(3)", "--dim", "8")[0] == 2
    assert run(capsys, "coeff", "(2 1; 1 1)", "--dim", "8")[0] == 2
    assert run(capsys, "siegel", "--p", "4", "--gram", "(4)")[0] == 2
    assert run(capsys, "siegel", "--p", "2", "--gram", "(0)")[0] == 2
    assert run(capsys, "bounds", "--dim", "23", "--base", "24")[0] == 2
    assert run(capsys, "reduce", "--dim", "5")[0] == 2


def test_console_script_help():
    result = subprocess.run(
        [sys.executable, "-m", "latmass.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "mass" in result.stdout and "bounds" in result.stdout
