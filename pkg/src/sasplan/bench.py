"""Benchmark harness: run config x task suites, score them, emit CSV.

Scoring follows the agile-track convention: coverage is 1 per solved
task; the runtime score is 1 at or below 1 s, 0 at or above 300 s (or
unsolved), log-interpolated in between; the expansions score is 1 at or
below 100 expansions and 0 at or above 10^6.  The expansions
interpolation is normalized so the lower bound scores exactly 1
(`1 - log(x/L)/log(U/L)`); pass `literal=True` for the unnormalized
`1 - log(x)/log(U)` variant.

Each (task, config) pair runs in its own child process with the limits
passed down; the child enforces them internally and the harness kills
runaways after a grace period.  Per-run failures become unsolved rows.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

AGILE_LOWER_S = 1.0
AGILE_UPPER_S = 300.0
EXPANSIONS_LOWER = 100
EXPANSIONS_UPPER = 10**6
KILL_GRACE_S = 30.0

CSV_HEADER = (
    "domain", "task", "config", "solved", "runtime_s", "expansions",
    "plan_length", "agile_score", "expansions_score",
)


def agile_score(runtime_s: float, solved: bool) -> float:
    """Runtime score in [0, 1]; 0 for unsolved runs."""
    if not solved or runtime_s >= AGILE_UPPER_S:
        return 0.0
    if runtime_s <= AGILE_LOWER_S:
        return 1.0
    return 1.0 - math.log(runtime_s) / math.log(AGILE_UPPER_S)


def expansions_score(expansions: float, solved: bool, literal: bool = False) -> float:
    """Expansions score in [0, 1]; 0 for unsolved runs."""
    if not solved or expansions >= EXPANSIONS_UPPER:
        return 0.0
    if expansions <= EXPANSIONS_LOWER:
        return 1.0
    if literal:
        return 1.0 - math.log(expansions) / math.log(EXPANSIONS_UPPER)
    return 1.0 - math.log(expansions / EXPANSIONS_LOWER) / math.log(
        EXPANSIONS_UPPER / EXPANSIONS_LOWER
    )


@dataclass(frozen=True)
class RunRecord:
    domain: str
    task: str
    config: str
    solved: bool
    runtime_s: float
    expansions: int
    plan_length: int | None


@dataclass
class Totals:
    coverage: int = 0
    expansions_score: float = 0.0
    agile_score: float = 0.0


@dataclass
class ScoreReport:
    per_config: dict[str, Totals]
    per_domain: dict[tuple[str, str], Totals]

    def to_text(self) -> str:
        lines = []
        for config, totals in self.per_config.items():
            lines.append(
                f"config={config} coverage={totals.coverage} "
                f"expansions_score={totals.expansions_score!r} "
                f"agile_score={totals.agile_score!r}"
            )
        config_order = {c: i for i, c in enumerate(self.per_config)}
        for (config, domain) in sorted(self.per_domain, key=lambda k: (config_order[k[0]], k[1])):
            totals = self.per_domain[(config, domain)]
            lines.append(
                f"config={config} domain={domain} coverage={totals.coverage} "
                f"expansions_score={totals.expansions_score!r} "
                f"agile_score={totals.agile_score!r}"
            )
        return "\n".join(lines) + "\n"


def build_report(records: list[RunRecord], configs: list[str] | None = None,
                 literal: bool = False) -> ScoreReport:
    """Sum per-record scores into per-config and per-domain totals."""
    if configs is None:
        configs = list(dict.fromkeys(r.config for r in records))
    per_config = {c: Totals() for c in configs}
    per_domain: dict[tuple[str, str], Totals] = {}
    for record in records:
        a = agile_score(record.runtime_s, record.solved)
        e = expansions_score(record.expansions, record.solved, literal)
        for totals in (
            per_config.setdefault(record.config, Totals()),
            per_domain.setdefault((record.config, record.domain), Totals()),
        ):
            totals.coverage += int(record.solved)
            totals.agile_score += a
            totals.expansions_score += e
    return ScoreReport(per_config, per_domain)


def parse_manifest(path) -> list[tuple[str, str]]:
    """(domain, task path) pairs; one task path per line, with an optional
    `domain<TAB>path` form.  Blank lines and # comments are skipped."""
    entries = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            domain, task_path = line.split("\t", 1)
            entries.append((domain.strip(), task_path.strip()))
        else:
            parent = Path(line).parent.name
            entries.append((parent or "-", line))
    return entries


def _parse_stats(stdout: str) -> dict[str, str]:
    stats = {}
    for line in stdout.splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            stats[key] = value
    return stats


def run_one(domain: str, task_path: str, config: str, time_limit: float,
            memory_limit: int, max_expansions: int | None = None) -> RunRecord:
    """Run one (task, config) pair in a child process."""
    cmd = [
        sys.executable, "-m", "sasplan.cli", task_path,
        "--config", config,
        "--time-limit", str(time_limit),
        "--memory-limit", str(memory_limit),
    ]
    if max_expansions is not None:
        cmd += ["--max-expansions", str(max_expansions)]
    task_name = Path(task_path).stem
    try:
        proc = subprocess.run(
            cmd, capture_output=True, text=True, timeout=time_limit + KILL_GRACE_S
        )
        stats = _parse_stats(proc.stdout)
    except subprocess.TimeoutExpired:
        return RunRecord(domain, task_name, config, False, time_limit, 0, None)
    solved = stats.get("outcome") == "solved"
    runtime = float(stats.get("runtime_s", time_limit) or time_limit)
    expansions = int(stats.get("expansions", 0) or 0)
    plan_length = int(stats["plan_length"]) if solved and stats.get("plan_length") else None
    return RunRecord(domain, task_name, config, solved, runtime, expansions, plan_length)


def run_suite(entries: list[tuple[str, str]], configs: list[str],
              time_limit: float = 300.0, memory_limit: int = 8 * 1024**3,
              max_expansions: int | None = None, jobs: int = 1,
              literal: bool = False) -> tuple[list[RunRecord], ScoreReport]:
    """Run the cartesian suite; rows come back in manifest x config order."""
    runs = [
        (domain, task_path, config)
        for domain, task_path in entries
        for config in configs
    ]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(
                pool.map(
                    lambda r: run_one(*r, time_limit, memory_limit, max_expansions), runs
                )
            )
    else:
        records = [run_one(*r, time_limit, memory_limit, max_expansions) for r in runs]
    return records, build_report(records, configs, literal)


def records_to_csv(records: list[RunRecord], literal: bool = False) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([
            r.domain, r.task, r.config, int(r.solved), repr(r.runtime_s), r.expansions,
            r.plan_length if r.plan_length is not None else "",
            repr(agile_score(r.runtime_s, r.solved)),
            repr(expansions_score(r.expansions, r.solved, literal)),
        ])
    return out.getvalue()


def records_from_csv(text: str) -> list[RunRecord]:
    reader = csv.DictReader(io.StringIO(text))
    records = []
    for row in reader:
        records.append(
            RunRecord(
                domain=row["domain"],
                task=row["task"],
                config=row["config"],
                solved=row["solved"] == "1",
                runtime_s=float(row["runtime_s"]),
                expansions=int(row["expansions"]),
                plan_length=int(row["plan_length"]) if row["plan_length"] else None,
            )
        )
    return records


def rescore(csv_text: str, literal: bool = False) -> ScoreReport:
    """Rebuild the score report of a stored records CSV."""
    return build_report(records_from_csv(csv_text), literal=literal)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plan-bench",
        description="Run configuration x task suites and score them.",
    )
    parser.add_argument("manifest", nargs="?", help="task manifest (one path per line)")
    parser.add_argument("--configs", default="lama,nolan",
                        help="comma-separated configuration names")
    parser.add_argument("--time-limit", type=float, default=300.0, metavar="S")
    parser.add_argument("--memory-limit", type=int, default=8 * 1024**3, metavar="BYTES")
    parser.add_argument("--max-expansions", type=int, default=None, metavar="N")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--records-csv", default=None, metavar="PATH",
                        help="where to write the per-run CSV")
    parser.add_argument("--report", default=None, metavar="PATH",
                        help="where to write the score report (default stdout)")
    parser.add_argument("--rescore", default=None, metavar="CSV",
                        help="offline mode: rebuild the report of a stored CSV")
    parser.add_argument("--literal-footnote-formula", action="store_true",
                        help="use the unnormalized expansions-score interpolation")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    literal = args.literal_footnote_formula
    if args.rescore:
        report = rescore(Path(args.rescore).read_text(), literal)
    else:
        if not args.manifest:
            print("plan-bench: a manifest is required unless --rescore is given", file=sys.stderr)
            return 2
        try:
            entries = parse_manifest(args.manifest)
        except OSError as exc:
            print(f"plan-bench: cannot read manifest: {exc}", file=sys.stderr)
            return 2
        configs = [c.strip() for c in args.configs.split(",") if c.strip()]
        records, report = run_suite(
            entries, configs, args.time_limit, args.memory_limit,
            args.max_expansions, args.jobs, literal,
        )
        if args.records_csv:
            Path(args.records_csv).write_text(records_to_csv(records, literal))
    text = report.to_text()
    if args.report:
        Path(args.report).write_text(text)
    else:
        print(text, end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
