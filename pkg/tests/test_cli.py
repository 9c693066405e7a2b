import csv
import io

import pytest

from noblemeans.cli import main
from noblemeans.entropy import clear_generation_cache, entropy_series


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_generate_deterministic_paths(capsys):
    code, out, _ = run(capsys, ["generate", "--m", "1", "--probs", "1,0", "--steps", "3"])
    assert code == 0
    assert out.splitlines()[0] == "baaba"
    code, out, _ = run(capsys, ["generate", "--m", "1", "--probs", "0,1", "--steps", "3"])
    assert code == 0
    assert out.splitlines()[0] == "abaab"
    assert "a_count=3 b_count=2" in out


def test_generate_same_seed_same_output(capsys):
    first = run(capsys, ["generate", "--m", "2", "--steps", "5", "--seed", "99"])
    second = run(capsys, ["generate", "--m", "2", "--steps", "5", "--seed", "99"])
    assert first == second


def test_generate_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("NOBLEMEANS_SEED", "1234")
    _, with_env, _ = run(capsys, ["generate", "--m", "1", "--steps", "6"])
    _, explicit, _ = run(capsys, ["generate", "--m", "1", "--steps", "6", "--seed", "1234"])
    assert with_env == explicit


def test_entropy_series_rows(capsys):
    code, out, _ = run(capsys, ["entropy", "--m", "1-7", "--mode", "series"])
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 7
    for row in rows:
        expected = entropy_series(int(row["m"]), 1e-9).value
        assert float(row["value"]) == pytest.approx(expected, abs=1e-12)
        assert row["method"] == "series"


def test_entropy_empirical_nondecreasing(capsys):
    code, out, _ = run(capsys, ["entropy", "--m", "1", "--mode", "both", "--max-n", "8"])
    assert code == 0
    rows = parse_csv(out)
    series = [float(r["value"]) for r in rows if r["method"] == "series"]
    empirical = [float(r["value"]) for r in rows if r["method"] == "empirical"]
    assert len(empirical) == 6
    assert all(a <= b + 1e-15 for a, b in zip(empirical, empirical[1:]))
    assert all(v <= series[0] + 0.01 for v in empirical)


def test_entropy_partial_rows_on_resource_cap(capsys):
    clear_generation_cache()
    code, out, err = run(
        capsys,
        ["entropy", "--m", "1", "--mode", "empirical", "--max-n", "9", "--max-letters", "1000"],
    )
    assert code == 2
    rows = parse_csv(out)
    assert len(rows) >= 3  # partial results before the cap
    assert "error" in err.lower() or "cap" in err.lower()
    clear_generation_cache()


def test_complexity_both_modes(capsys):
    code, out, _ = run(capsys, ["complexity", "--m", "1", "--lengths", "1-4", "--mode", "both"])
    assert code == 0
    rows = parse_csv(out)
    exact = {int(r["n_or_ell"]): float(r["value"]) for r in rows if r["method"] == "exact"}
    formula = {int(r["n_or_ell"]): float(r["value"]) for r in rows if r["method"] == "formula"}
    assert exact == {1: 2, 2: 4, 3: 7, 4: 13}
    assert formula == {4: 13}


def test_frequencies_table(capsys):
    code, out, _ = run(
        capsys,
        ["frequencies", "--m", "1", "--ell", "2", "--probs", "0.5,0.5",
         "--empirical", "200000", "--seed", "5"],
    )
    assert code == 0
    rows = parse_csv(out)
    assert [r["word"] for r in rows] == ["aa", "ab", "ba", "bb"]
    for row in rows:
        assert float(row["abs_error"]) <= 5e-3
        assert float(row["abs_error"]) == pytest.approx(
            abs(float(row["analytic_frequency"]) - float(row["empirical_frequency"])), abs=1e-15
        )


def test_frequencies_analytic_only(capsys):
    code, out, _ = run(capsys, ["frequencies", "--m", "2", "--ell", "1"])
    assert code == 0
    rows = parse_csv(out)
    assert [r["word"] for r in rows] == ["a", "b"]
    assert rows[0]["empirical_frequency"] == ""


def test_diffract_csv_schema(capsys, tmp_path):
    out_file = tmp_path / "spec.csv"
    code, _, _ = run(
        capsys,
        ["diffract", "--m", "1", "--probs", "0.5,0.5", "--n", "4", "--kmax", "1.0",
         "--grid", "30", "--samples", "10", "--seed", "1", "--out", str(out_file)],
    )
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == "k,pp,ac,mc_mean,mc_stderr,u,v"
    rows = parse_csv(out_file.read_text())
    assert all(float(r["mc_mean"]) >= 0 for r in rows)
    assert any(r["u"] != "" for r in rows)


def test_diffract_other_family_leaves_analytic_blank(capsys):
    code, out, _ = run(
        capsys,
        ["diffract", "--m", "2", "--probs", "0.3,0.3,0.4", "--n", "3", "--kmax", "1.0",
         "--grid", "10", "--samples", "5", "--seed", "0"],
    )
    assert code == 0
    rows = parse_csv(out)
    assert all(r["pp"] == "" and r["ac"] == "" for r in rows)


def test_usage_errors_exit_one(capsys):
    assert run(capsys, ["nosuchcommand"])[0] == 1
    assert run(capsys, ["generate", "--m", "1", "--probs", "0.5,0.6"])[0] == 1
    assert run(capsys, ["generate", "--m", "2", "--probs", "0.5,0.5"])[0] == 1
    assert run(capsys, ["entropy", "--m", "x-y"])[0] == 1


def test_help_lists_defaults(capsys):
    code, out, _ = run(capsys, ["diffract", "--help"])
    assert code == 0
    assert "--samples" in out and "default: 1000" in out
    assert "--misprint-mode" in out


def test_config_file_supplies_defaults(capsys, tmp_path):
    config = tmp_path / "defaults.cfg"
    config.write_text("# defaults for every subcommand\nsteps=3\nprobs=1,0\n")
    code, out, _ = run(capsys, ["--config", str(config), "generate", "--m", "1"])
    assert code == 0
    assert out.splitlines()[0] == "baaba"
    # explicit flags override config values
    code, out, _ = run(capsys, ["--config", str(config), "generate", "--m", "1", "--probs", "0,1"])
    assert out.splitlines()[0] == "abaab"


def test_validate_quick_reports_known_state(capsys):
    code, out, err = run(capsys, ["validate", "--quick", "--misprint-mode"])
    lines = [line for line in out.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert len(lines) == 10
    # the reference-table check fails honestly on its truncated second entry
    assert code == 3
    fails = [line for line in lines if line.startswith("FAIL")]
    assert len(fails) == 1 and "entropy-series-reference-values" in fails[0]
    misprint_lines = [line for line in lines if "expected-divergent" in line]
    assert misprint_lines and "expected-divergent: True" in misprint_lines[0]
