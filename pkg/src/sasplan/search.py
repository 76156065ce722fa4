"""State registry, successor generation, and the deferred-evaluation
greedy best-first search driver.

The driver follows the lazy scheme: successors are queued under their
parent's cached heuristic values and evaluated only when popped.  Novelty
key components are the exception: they are computed at insertion time on
the successor itself, partitioned by the parent's cached values (the root
acts as its own parent).  States whose relaxed-plan estimate is infinite
are dead ends of the real task and are pruned.  Whenever an expansion
improves the best seen value of any heuristic, every preferred sublist is
boosted.

Searches are deterministic: successor order is ascending operator index,
ties in the open lists resolve by insertion order, and no randomness is
involved anywhere.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .configs import (
    NoveltyComponent,
    PolicySpec,
    PrefComponent,
    ValueComponent,
    compile_policy,
)
from .landmarks import LandmarkCountEvaluator, LandmarkGraph, generate_landmark_graph
from .novelty import (
    FALLBACK_THRESHOLD_BYTES,
    NoveltyTable,
    estimate_table_bytes,
    partition_value_bound,
)
from .open_lists import AllEmptyError, Entry, OpenPolicy, Sublist
from .relaxation import INFINITY, HeuristicReport, RelaxationEvaluator
from .sas import Task, atoms_hold

SOLVED = "solved"
UNSOLVABLE = "proven-unsolvable-under-relaxation"
EXHAUSTED = "exhausted"
TIME_LIMIT = "time-limit"
MEMORY_LIMIT = "memory-limit"
EXPANSION_LIMIT = "expansion-limit"

GENERATED, EXPANDED, PRUNED = 0, 1, 2


class InapplicableOperator(Exception):
    """apply_operator called with an operator whose precondition fails."""


class MemoryLimitExceeded(Exception):
    """Registry grew past its configured budget."""


def applicable_operators(task: Task, values) -> list[int]:
    """Indices of all operators applicable in `values`, ascending."""
    return [op.index for op in task.operators if atoms_hold(values, op.preconditions)]


def apply_operator(task: Task, values, op_index: int) -> tuple[int, ...]:
    """Successor of `values` under an applicable operator.

    Effects whose conditions fail leave their variable unchanged; effects
    are applied in listed order.  The input is not modified.
    """
    op = task.operators[op_index]
    if not atoms_hold(values, op.preconditions):
        raise InapplicableOperator(f"operator {op.name} is not applicable")
    new_values = list(values)
    for eff in op.effects:
        if atoms_hold(values, eff.conditions):
            new_values[eff.var] = eff.new_val
    return tuple(new_values)


class StateRegistry:
    """Interns packed states and hands out dense ids (initial state first).

    Tracks a size estimate against an optional byte budget; registering
    past the budget raises :class:`MemoryLimitExceeded`.
    """

    def __init__(self, num_variables: int, memory_limit_bytes: int | None = None,
                 extra_bytes_per_state: int = 0):
        self._ids: dict[tuple[int, ...], int] = {}
        self._states: list[tuple[int, ...]] = []
        # dict slot + tuple + node bookkeeping, per state
        self._bytes_per_state = 256 + 8 * num_variables + extra_bytes_per_state
        self._budget = memory_limit_bytes
        self.estimated_bytes = 0

    def __len__(self) -> int:
        return len(self._states)

    def __getitem__(self, state_id: int) -> tuple[int, ...]:
        return self._states[state_id]

    def register(self, values: tuple[int, ...]) -> tuple[int, bool]:
        state_id = self._ids.get(values)
        if state_id is not None:
            return state_id, False
        if self._budget is not None and self.estimated_bytes + self._bytes_per_state > self._budget:
            raise MemoryLimitExceeded(f"state registry budget of {self._budget} bytes exceeded")
        state_id = len(self._states)
        self._ids[values] = state_id
        self._states.append(values)
        self.estimated_bytes += self._bytes_per_state
        return state_id, True


class SearchNode:
    """Per-state bookkeeping: parent link, path length, cached values."""

    __slots__ = ("parent", "op", "g", "status", "cached", "preferred")

    def __init__(self, parent, op, g, cached, preferred):
        self.parent = parent
        self.op = op
        self.g = g
        self.status = GENERATED
        self.cached = cached  # (hff, hlm) values; hlm is None when unused
        self.preferred = preferred


@dataclass(frozen=True)
class SearchLimits:
    time_seconds: float = 300.0
    memory_bytes: int = 8 * 1024**3
    max_expansions: int | None = None


@dataclass
class Statistics:
    expansions: int = 0
    generated: int = 0  # states admitted to at least one sublist
    registered_peak: int = 0
    evaluations: dict[str, int] = field(default_factory=lambda: {"hff": 0, "hlm": 0})
    wall_seconds: float = 0.0
    novelty_fallback: bool = False
    memory_estimate_bytes: int = 0


@dataclass
class SearchResult:
    outcome: str
    plan: list[int] | None
    statistics: Statistics
    expanded_states: list[int]

    @property
    def solved(self) -> bool:
        return self.outcome == SOLVED


def extract_plan(nodes, goal_state: int) -> list[int]:
    """Operator indices along the parent chain, initial state first."""
    plan = []
    node = nodes[goal_state]
    while node.parent is not None:
        plan.append(node.op)
        node = nodes[node.parent]
    plan.reverse()
    return plan


@dataclass(frozen=True)
class PlanCheck:
    valid: bool
    failed_step: int | None  # first inapplicable step, None for goal miss
    reason: str

    def __bool__(self) -> bool:
        return self.valid


def validate_plan(task: Task, plan) -> PlanCheck:
    """Replay a plan from the initial state and check the goal."""
    values = task.initial_state
    for step, op_index in enumerate(plan):
        op = task.operators[op_index]
        if not atoms_hold(values, op.preconditions):
            return PlanCheck(False, step, f"operator {op.name} inapplicable at step {step}")
        values = apply_operator(task, values, op_index)
    if not task.goal_satisfied(values):
        return PlanCheck(False, None, "plan executes but misses the goal")
    return PlanCheck(True, None, "plan is valid")


class _Engine:
    """One lazy greedy best-first search over one task."""

    def __init__(self, task: Task, spec: PolicySpec, limits: SearchLimits, novelty_bound: int,
                 landmark_graph: LandmarkGraph | None = None):
        self.task = task
        self.spec = spec
        self.limits = limits
        self.novelty_bound = novelty_bound
        self.stats = Statistics()

        self.relax = RelaxationEvaluator(task)
        self.lm_eval = None
        lm_bytes = 0
        if spec.uses_hlm:
            graph = landmark_graph or generate_landmark_graph(task, self.relax.relaxed)
            self.lm_eval = LandmarkCountEvaluator(graph)
            lm_bytes = len(graph) // 8 + 40
        self.registry = StateRegistry(task.num_variables, limits.memory_bytes, lm_bytes)
        self.nodes: list[SearchNode] = []
        self.lm_status: list[int | None] = []
        self.policy = OpenPolicy(
            [Sublist(sub.preferred_only) for sub in spec.sublists],
            boost_amount=spec.boost_amount,
        )
        self.tables: dict[tuple[int, int], NoveltyTable] = {}
        self.best_values: dict[str, int] = {}
        self.expanded: list[int] = []
        self._value_index = {"hff": 0, "hlm": 1}

    def _build_novelty_tables(self, initial_hff: int) -> None:
        """Size each novelty component's table; oversized tables fall back
        to bound 1 for the whole search."""
        num_landmarks = len(self.lm_eval.graph) if self.lm_eval else 0
        atom_count = self.task.num_atoms
        for i, j, comp in self.spec.novelty_components():
            bound_proxy = partition_value_bound(comp.partition, num_landmarks, initial_hff)
            estimate = estimate_table_bytes(atom_count, bound_proxy, self.novelty_bound)
            fallback = estimate > FALLBACK_THRESHOLD_BYTES
            self.tables[(i, j)] = NoveltyTable(atom_count, self.novelty_bound, fallback)
            if fallback:
                self.stats.novelty_fallback = True

    def _evaluate(self, state_id: int, values) -> HeuristicReport:
        """Evaluate hff (and hlm if used) on a state, caching values on
        its node and its landmark status in the status table."""
        node = self.nodes[state_id]
        report = self.relax.hff(values)
        self.stats.evaluations["hff"] += 1
        hlm_value = None
        if self.lm_eval is not None:
            if node.parent is None:
                parent_status = self.lm_eval.initial_status(self.task.initial_state)
            else:
                parent_status = self.lm_status[node.parent]
            hlm_value, status = self.lm_eval.evaluate(parent_status, values)
            self.lm_status[state_id] = status
            self.stats.evaluations["hlm"] += 1
        node.cached = (report.value, hlm_value)
        return report

    def _make_key(self, sublist_index: int, values, atom_ids, cached, g: int,
                  preferred: bool) -> tuple[int, ...]:
        key = []
        for j, comp in enumerate(self.spec.sublists[sublist_index].components):
            if isinstance(comp, ValueComponent):
                key.append(cached[self._value_index[comp.name]])
            elif isinstance(comp, PrefComponent):
                key.append(0 if preferred else 1)
            elif isinstance(comp, NoveltyComponent):
                partition = tuple(cached[self._value_index[name]] for name in comp.partition)
                key.append(self.tables[(sublist_index, j)].compute_novelty(atom_ids, partition))
        key.append(g)
        return tuple(key)

    def _insert(self, state_id: int, values, cached, g: int, preferred: bool) -> None:
        """Push a state into every sublist that admits it; novelty tables
        are only touched for admitting sublists."""
        atom_ids = None
        inserted = False
        for i, sub in enumerate(self.policy.sublists):
            if sub.preferred_only and not preferred:
                continue
            if atom_ids is None:
                atom_ids = self.task.state_atom_ids(values)
            key = self._make_key(i, values, atom_ids, cached, g, preferred)
            sub.push(Entry(state_id, key, self.policy.next_seq()))
            inserted = True
        if inserted:
            self.stats.generated += 1

    def _check_improvement(self, cached) -> bool:
        improved = False
        for name, index in self._value_index.items():
            value = cached[index]
            if value is None:
                continue
            best = self.best_values.get(name)
            if best is None or value < best:
                self.best_values[name] = value
                improved = True
        return improved

    def _memory_estimate(self) -> int:
        return self.registry.estimated_bytes + sum(t.estimated_bytes() for t in self.tables.values())

    def _finish(self, outcome: str, plan: list[int] | None, started: float) -> SearchResult:
        self.stats.wall_seconds = time.perf_counter() - started
        self.stats.registered_peak = len(self.registry)
        self.stats.memory_estimate_bytes = self._memory_estimate()
        return SearchResult(outcome, plan, self.stats, self.expanded)

    def run(self) -> SearchResult:
        started = time.perf_counter()
        root_values = self.task.initial_state
        root_id, _ = self.registry.register(root_values)
        self.nodes.append(SearchNode(None, None, 0, (None, None), True))
        self.lm_status.append(None)

        report = self._evaluate(root_id, root_values)
        if report.value == INFINITY:
            return self._finish(UNSOLVABLE, None, started)
        self._build_novelty_tables(int(report.value))
        # The root seeds every sublist and keys on its own values.
        self._insert(root_id, root_values, self.nodes[root_id].cached, 0, preferred=True)

        while True:
            if time.perf_counter() - started > self.limits.time_seconds:
                return self._finish(TIME_LIMIT, None, started)
            if self.limits.max_expansions is not None and self.stats.expansions >= self.limits.max_expansions:
                return self._finish(EXPANSION_LIMIT, None, started)
            if self._memory_estimate() > self.limits.memory_bytes:
                return self._finish(MEMORY_LIMIT, None, started)

            try:
                index = self.policy.select_sublist()
            except AllEmptyError:
                return self._finish(EXHAUSTED, None, started)
            entry = self.policy.sublists[index].pop_best()
            node = self.nodes[entry.state]
            if node.status != GENERATED:
                continue

            values = self.registry[entry.state]
            if entry.state != root_id:
                report = self._evaluate(entry.state, values)
            if report.value == INFINITY:
                node.status = PRUNED
                continue
            if self.task.goal_satisfied(values):
                return self._finish(SOLVED, extract_plan(self.nodes, entry.state), started)
            node.status = EXPANDED
            self.stats.expansions += 1
            self.expanded.append(entry.state)
            if self._check_improvement(node.cached) and self.policy.has_preferred_sublists:
                self.policy.boost()

            preferred_ops: frozenset[int] = frozenset()
            if self.spec.needs_pref:
                preferred_ops = report.preferred
                if self.lm_eval is not None:
                    preferred_ops |= self.lm_eval.preferred_operators(
                        self.lm_status[entry.state], values
                    )

            try:
                for op_index in applicable_operators(self.task, values):
                    successor = apply_operator(self.task, values, op_index)
                    succ_id, is_new = self.registry.register(successor)
                    if not is_new:
                        continue
                    child = SearchNode(
                        entry.state, op_index, node.g + 1, node.cached,
                        op_index in preferred_ops,
                    )
                    self.nodes.append(child)
                    self.lm_status.append(None)
                    self._insert(succ_id, successor, node.cached, child.g, child.preferred)
            except MemoryLimitExceeded:
                return self._finish(MEMORY_LIMIT, None, started)


def lazy_gbfs(task: Task, policy: PolicySpec | str, limits: SearchLimits | None = None,
              novelty_bound: int = 2, landmark_graph: LandmarkGraph | None = None) -> SearchResult:
    """Run a deferred-evaluation greedy best-first search.

    `policy` may be a configuration name or a compiled spec.  Limit hits
    are reported through the result's outcome, never raised.
    """
    spec = compile_policy(policy) if isinstance(policy, str) else policy
    engine = _Engine(task, spec, limits or SearchLimits(), novelty_bound, landmark_graph)
    return engine.run()
