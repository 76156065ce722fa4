"""Planner CLI: exit codes, artifacts, and debug dumps."""

import subprocess
import sys

import pytest

from sasplan.cli import main

from test_configs import GOLDEN_BFWS_F6, GOLDEN_LAMA, GOLDEN_NOLAN


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def stats_dict(out):
    return dict(line.split("=", 1) for line in out.strip().splitlines())


def test_solved_writes_plan_and_stats(tmp_path, fixture_dir, capsys):
    plan_file = tmp_path / "plan.txt"
    stats_file = tmp_path / "stats.txt"
    code, out, _ = run_cli(
        capsys,
        str(fixture_dir / "chain.sas"),
        "--config", "nolan",
        "--plan-file", str(plan_file),
        "--stats-file", str(stats_file),
    )
    assert code == 0
    assert plan_file.read_text() == "(o01)\n(o12)\n; cost = 2 (unit cost)\n"
    stats = stats_dict(out)
    assert stats["outcome"] == "solved"
    assert stats["plan_length"] == "2"
    assert stats["expansions"] == "2"
    assert stats_file.read_text() == out


def test_unsolvable_exit_code(fixture_dir, tmp_path, capsys):
    plan_file = tmp_path / "plan.txt"
    code, out, _ = run_cli(
        capsys,
        str(fixture_dir / "chain-unsolvable.sas"),
        "--config", "lama",
        "--plan-file", str(plan_file),
    )
    assert code == 1
    assert stats_dict(out)["outcome"] == "proven-unsolvable-under-relaxation"
    assert not plan_file.exists()


def test_limit_exit_code(fixture_dir, capsys):
    code, out, _ = run_cli(
        capsys,
        str(fixture_dir / "pair.sas"),
        "--config", "lama",
        "--max-expansions", "1",
    )
    assert code == 2
    assert stats_dict(out)["outcome"] == "expansion-limit"


def test_unknown_config_exit_code(fixture_dir, capsys):
    code, _, err = run_cli(capsys, str(fixture_dir / "chain.sas"), "--config", "bogus")
    assert code == 3
    assert "bogus" in err


def test_missing_task_exit_code(capsys):
    code, _, err = run_cli(capsys, "no-such-task.sas", "--config", "lama")
    assert code == 3
    assert "cannot read task" in err


def test_malformed_task_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.sas"
    bad.write_text("begin_version\n2\nend_version\n")
    code, _, err = run_cli(capsys, str(bad), "--config", "lama")
    assert code == 3
    assert "invalid task" in err


@pytest.mark.parametrize(
    "config,golden",
    [("lama", GOLDEN_LAMA), ("bfws-f6", GOLDEN_BFWS_F6), ("nolan", GOLDEN_NOLAN)],
)
def test_dump_policy_golden(fixture_dir, capsys, config, golden):
    code, out, _ = run_cli(
        capsys, str(fixture_dir / "chain.sas"), "--config", config, "--dump-policy"
    )
    assert code == 0
    assert out == golden


def test_dump_landmarks(fixture_dir, capsys):
    code, out, _ = run_cli(
        capsys, str(fixture_dir / "chain.sas"), "--config", "nolan", "--dump-landmarks"
    )
    assert code == 0
    assert "var0=at2 [goal] parents: var0=at1" in out
    assert "var0=at1 parents: -" in out


def test_stats_deterministic_across_runs(fixture_dir, capsys):
    def one_run():
        _, out, _ = run_cli(capsys, str(fixture_dir / "conditional.sas"), "--config", "lama")
        stats = stats_dict(out)
        stats.pop("runtime_s")
        return stats

    assert one_run() == one_run()


def test_novelty_bound_flag(fixture_dir, capsys):
    code, out, _ = run_cli(
        capsys, str(fixture_dir / "pair.sas"), "--config", "bfws-f2", "--novelty-bound", "1"
    )
    assert code == 0
    assert stats_dict(out)["outcome"] == "solved"


def test_module_invocation_matches_entry_point(fixture_dir):
    """The harness spawns `python -m sasplan.cli`; make sure that works."""
    proc = subprocess.run(
        [sys.executable, "-m", "sasplan.cli", str(fixture_dir / "chain.sas"), "--config", "nolan"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "outcome=solved" in proc.stdout
