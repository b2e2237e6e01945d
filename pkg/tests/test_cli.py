"""Command-line front end: exit codes, seed resolution, output formats,
and the demo narratives."""

import json

import pytest

from effectus.cli import main
from effectus.harness import DEFAULT_SEED

FAST = ["--cases", "4"]

REPORT_KEYS = {"instance", "law", "cases", "failures", "witnesses",
               "max_residual", "seed"}


# ---------------------------------------------------------------------------
# check: exit codes.
# ---------------------------------------------------------------------------


def test_check_single_instance_passes(capsys):
    assert main(["check", "--instance", "sets"] + FAST) == 0
    out = capsys.readouterr().out
    assert "all laws hold" in out
    assert "FAIL" not in out


def test_check_dist_500_cases_seed_11():
    assert main(["check", "--instance", "dist", "--cases", "500",
                 "--seed", "11"]) == 0


def test_check_overtight_vn_tolerance_fails_gracefully(capsys):
    assert main(["check", "--instance", "vn", "--tolerance", "1e-15"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "LAW FAILURES DETECTED" in out


def test_check_unknown_instance_is_usage_error(capsys):
    assert main(["check", "--instance", "nosuch"]) == 2
    err = capsys.readouterr().err
    assert "unknown instance 'nosuch'" in err
    assert "sets" in err and "vn" in err


def test_check_unknown_law_is_usage_error(capsys):
    assert main(["check", "--law", "nosuch"]) == 2
    assert "unknown law" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# check: seed resolution.
# ---------------------------------------------------------------------------


def _reported_seeds(path):
    with open(path) as fh:
        result = json.load(fh)
    return result, {r["seed"] for r in result["reports"]}


def test_seed_defaults_to_fixed_constant(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("EFFECTUS_SEED", raising=False)
    out = tmp_path / "r.json"
    assert main(["check", "--instance", "sets", "--law", "kleisli-laws",
                 "--format", "json", "-o", str(out)] + FAST) == 0
    result, seeds = _reported_seeds(out)
    assert seeds == {DEFAULT_SEED}


def test_seed_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("EFFECTUS_SEED", "777")
    out = tmp_path / "r.json"
    assert main(["check", "--instance", "sets", "--law", "kleisli-laws",
                 "--format", "json", "-o", str(out)] + FAST) == 0
    _, seeds = _reported_seeds(out)
    assert seeds == {777}


def test_seed_flag_beats_env(tmp_path, monkeypatch):
    monkeypatch.setenv("EFFECTUS_SEED", "777")
    out = tmp_path / "r.json"
    assert main(["check", "--instance", "sets", "--law", "kleisli-laws",
                 "--seed", "31", "--format", "json", "-o", str(out)] + FAST) == 0
    _, seeds = _reported_seeds(out)
    assert seeds == {31}


def test_invalid_seed_env_is_usage_error(monkeypatch, capsys):
    monkeypatch.setenv("EFFECTUS_SEED", "not-a-number")
    assert main(["check", "--instance", "sets"] + FAST) == 2
    assert "EFFECTUS_SEED" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# check: output formats.
# ---------------------------------------------------------------------------


def test_json_report_file_matches_schema(tmp_path):
    out = tmp_path / "report.json"
    assert main(["check", "--instance", "ring", "--format", "json",
                 "-o", str(out)] + FAST) == 0
    result = json.loads(out.read_text())
    assert set(result) == {"ok", "reports"}
    assert result["ok"] is True
    assert result["reports"]
    for report in result["reports"]:
        assert set(report) == REPORT_KEYS
        assert report["instance"] == "ring"


def test_json_stdout_matches_file_output(tmp_path, capsys):
    args = ["check", "--instance", "fp", "--format", "json"] + FAST
    assert main(args) == 0
    printed = capsys.readouterr().out
    out = tmp_path / "r.json"
    assert main(args + ["-o", str(out)]) == 0
    assert printed.strip() == out.read_text().strip()


def test_human_report_lists_every_law(capsys):
    assert main(["check", "--instance", "hilb"] + FAST) == 0
    out = capsys.readouterr().out
    for law in ("kleisli-laws", "subst-functor", "truth-falsum",
                "quotient-adjunction", "comprehension-adjunction",
                "factorization", "coincidence", "sharpness"):
        assert law in out


def test_law_filter_runs_one_law(tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", "--law", "kleisli-laws", "--format", "json",
                 "-o", str(out)] + FAST) == 0
    result = json.loads(out.read_text())
    assert {r["law"] for r in result["reports"]} == {"kleisli-laws"}
    assert len(result["reports"]) == 7


# ---------------------------------------------------------------------------
# list-instances.
# ---------------------------------------------------------------------------


def test_list_instances_human(capsys):
    assert main(["list-instances"]) == 0
    out = capsys.readouterr().out
    for name in ("sets", "nondet", "dist", "fp", "hilb", "ring", "vn"):
        assert name in out
    assert "laws:" in out


def test_list_instances_json(capsys):
    assert main(["list-instances", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {r["name"] for r in rows} == {"sets", "nondet", "dist", "fp",
                                         "hilb", "ring", "vn"}
    for row in rows:
        assert set(row) == {"name", "description", "exact", "laws"}
        assert "kleisli-laws" in row["laws"]


# ---------------------------------------------------------------------------
# explain.
# ---------------------------------------------------------------------------


def test_explain_all_laws(capsys):
    assert main(["explain"]) == 0
    out = capsys.readouterr().out
    assert "quotient-adjunction:" in out
    assert "cp-sanity:" in out


def test_explain_one_law(capsys):
    assert main(["explain", "sharpness"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("sharpness:")
    assert "idempotent" in out


def test_explain_unknown_law(capsys):
    assert main(["explain", "nosuch"]) == 2
    assert "unknown law" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# demo.
# ---------------------------------------------------------------------------


def test_demo_all_sections(capsys):
    assert main(["demo"]) == 0
    out = capsys.readouterr().out
    for header in ("sets:", "dist:", "ring:", "vn:"):
        assert header in out


def test_demo_sets_section(capsys):
    assert main(["demo", "sets"]) == 0
    out = capsys.readouterr().out
    assert "X = {1, 2, 3}" in out
    assert "side-effect free: True" in out
    assert "ring:" not in out


def test_demo_ring_decomposition(capsys):
    assert main(["demo", "ring"]) == 0
    out = capsys.readouterr().out
    assert "Z6" in out
    assert "Z2 x Z3" in out
    assert "decompose(5) = ((3,), (2,))" in out


def test_demo_vn_side_effects(capsys):
    assert main(["demo", "vn"]) == 0
    out = capsys.readouterr().out
    assert "side-effect free for diag(1, 1/2): False" in out
    assert "side-effect free for a rotated unsharp effect: False" in out
    assert "side-effect free for the scalar effect 0.3*I: True" in out


def test_demo_unknown_scenario(capsys):
    assert main(["demo", "nosuch"]) == 2
    assert "unknown demo scenario" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# Entry point plumbing.
# ---------------------------------------------------------------------------


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_module_invocation():
    import subprocess
    import sys
    proc = subprocess.run(
        [sys.executable, "-m", "effectus.cli", "explain", "coincidence"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "coincidence:" in proc.stdout


def test_console_script_entry_point():
    import subprocess
    proc = subprocess.run(["effectus", "list-instances"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "vn" in proc.stdout
