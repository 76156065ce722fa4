"""Planner command line.

`plan <task.sas> --config <name>` runs one search per invocation, writes
the plan in the standard one-operator-per-line format, and reports
statistics as flat key=value lines (to stdout and, on request, to a
file).  Exit codes: 0 solved, 1 no plan exists / search space exhausted,
2 a time/memory/expansion limit was hit, 3 input errors.
"""

from __future__ import annotations

import argparse
import sys

from .configs import UnknownConfig, compile_policy, dump_policy, KNOWN_CONFIG_NAMES
from .landmarks import generate_landmark_graph
from .sas import SasError, load_sas
from .search import (
    EXHAUSTED,
    EXPANSION_LIMIT,
    MEMORY_LIMIT,
    SOLVED,
    TIME_LIMIT,
    UNSOLVABLE,
    SearchLimits,
    SearchResult,
    lazy_gbfs,
)

EXIT_SOLVED = 0
EXIT_UNSOLVED = 1
EXIT_LIMIT = 2
EXIT_INPUT_ERROR = 3

_EXIT_BY_OUTCOME = {
    SOLVED: EXIT_SOLVED,
    UNSOLVABLE: EXIT_UNSOLVED,
    EXHAUSTED: EXIT_UNSOLVED,
    TIME_LIMIT: EXIT_LIMIT,
    MEMORY_LIMIT: EXIT_LIMIT,
    EXPANSION_LIMIT: EXIT_LIMIT,
}

STATS_KEYS_HELP = (
    "statistics keys: config, task, outcome, plan_length, expansions, "
    "evaluations_hff, evaluations_hlm, generated, registered_peak, "
    "novelty_fallback, memory_estimate_bytes, runtime_s"
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plan",
        description="Greedy best-first planner over SAS+ tasks.",
        epilog=STATS_KEYS_HELP,
    )
    parser.add_argument("task", help="path to a SAS+ v3 task file")
    parser.add_argument(
        "--config",
        required=True,
        help=f"configuration name: one of {', '.join(KNOWN_CONFIG_NAMES)}, "
        "or alt:<sublists> (atoms hff, hff+, hlm, hlm+, f2hlm; f2hlm required)",
    )
    parser.add_argument("--time-limit", type=float, default=300.0, metavar="S",
                        help="wall-clock limit in seconds (default 300)")
    parser.add_argument("--memory-limit", type=int, default=8 * 1024**3, metavar="BYTES",
                        help="memory budget in bytes (default 8 GiB)")
    parser.add_argument("--max-expansions", type=int, default=None, metavar="N",
                        help="stop after N expansions")
    parser.add_argument("--plan-file", default=None, metavar="PATH",
                        help="where to write the plan (only written when solved)")
    parser.add_argument("--stats-file", default=None, metavar="PATH",
                        help="where to write the key=value statistics report")
    parser.add_argument("--novelty-bound", type=int, choices=(1, 2), default=2, metavar="K",
                        help="novelty bound for w components (default 2)")
    parser.add_argument("--dump-landmarks", action="store_true",
                        help="print the landmark graph and exit")
    parser.add_argument("--dump-policy", action="store_true",
                        help="print the compiled open-list policy and exit")
    return parser


def format_plan(task, plan: list[int]) -> str:
    lines = [f"({task.operators[op].name})" for op in plan]
    lines.append(f"; cost = {len(plan)} (unit cost)")
    return "\n".join(lines) + "\n"


def format_stats(result: SearchResult, config: str, task_path: str) -> str:
    stats = result.statistics
    lines = [
        f"config={config}",
        f"task={task_path}",
        f"outcome={result.outcome}",
        f"plan_length={len(result.plan) if result.plan is not None else ''}",
        f"expansions={stats.expansions}",
        f"evaluations_hff={stats.evaluations['hff']}",
        f"evaluations_hlm={stats.evaluations['hlm']}",
        f"generated={stats.generated}",
        f"registered_peak={stats.registered_peak}",
        f"novelty_fallback={int(stats.novelty_fallback)}",
        f"memory_estimate_bytes={stats.memory_estimate_bytes}",
        f"runtime_s={stats.wall_seconds!r}",
    ]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        policy = compile_policy(args.config)
    except UnknownConfig as exc:
        print(f"plan: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        task = load_sas(args.task)
    except OSError as exc:
        print(f"plan: cannot read task: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except SasError as exc:
        print(f"plan: invalid task: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    if args.dump_policy or args.dump_landmarks:
        if args.dump_policy:
            print(dump_policy(policy), end="")
        if args.dump_landmarks:
            print(generate_landmark_graph(task).dump(), end="")
        return EXIT_SOLVED

    limits = SearchLimits(args.time_limit, args.memory_limit, args.max_expansions)
    result = lazy_gbfs(task, policy, limits, novelty_bound=args.novelty_bound)

    stats_text = format_stats(result, args.config, args.task)
    print(stats_text, end="")
    if args.stats_file:
        with open(args.stats_file, "w") as f:
            f.write(stats_text)
    if result.plan is not None and args.plan_file:
        with open(args.plan_file, "w") as f:
            f.write(format_plan(task, result.plan))
    return _EXIT_BY_OUTCOME[result.outcome]


if __name__ == "__main__":
    sys.exit(main())
