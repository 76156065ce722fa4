"""Delete-relaxation heuristics: additive cost estimates and relaxed plans.

The additive estimate is the least fixed point of
``cost(atom) = 0`` if the atom holds in the evaluated state, else
``min over achievers o of (1 + sum of cost over pre(o))``, computed with
a Dijkstra-style pass over atoms.  The relaxed-plan estimate backchains
from the goal atoms through best supporters and counts the distinct
original operators used; its applicable plan operators are the preferred
operators (helpful actions).  All operators count as cost 1.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .sas import Task, atoms_hold

INFINITY = float("inf")


@dataclass(frozen=True)
class RelaxedOperator:
    """Single-add compilation of one (operator, effect) pair.

    Preconditions are the operator preconditions plus the effect
    conditions, as global atom ids; exactly one atom is added.
    """

    index: int
    op_index: int
    preconditions: tuple[int, ...]
    add_atom: int


class RelaxedTask:
    """Relaxed operators plus per-atom achiever and consumer lists."""

    def __init__(self, task: Task):
        self.task = task
        self.num_atoms = task.num_atoms
        ops: list[RelaxedOperator] = []
        for op in task.operators:
            pre_ids = [task.atom_id(a.var, a.val) for a in op.preconditions]
            for eff in op.effects:
                pre = sorted(set(pre_ids) | {task.atom_id(c.var, c.val) for c in eff.conditions})
                ops.append(
                    RelaxedOperator(len(ops), op.index, tuple(pre), task.atom_id(eff.var, eff.new_val))
                )
        self.operators = tuple(ops)
        self.achievers: list[list[int]] = [[] for _ in range(self.num_atoms)]
        self.consumers: list[list[int]] = [[] for _ in range(self.num_atoms)]
        for rop in ops:
            self.achievers[rop.add_atom].append(rop.index)
            for p in rop.preconditions:
                self.consumers[p].append(rop.index)
        self.goal_ids = tuple(task.atom_id(a.var, a.val) for a in task.goal)


@dataclass(frozen=True)
class HeuristicReport:
    """Relaxed-plan estimate for one state.

    `value` is the number of distinct operators in the relaxed plan, or
    infinity when some goal atom is not relaxed-reachable.  `preferred`
    holds the relaxed-plan operators applicable in the evaluated state.
    """

    value: int | float
    relaxed_plan: frozenset[int] | None
    preferred: frozenset[int]


class RelaxationEvaluator:
    """Evaluator with reusable scratch buffers; one instance per search.

    Not safe for concurrent calls on the same instance.
    """

    def __init__(self, task: Task):
        self.task = task
        self.relaxed = RelaxedTask(task)
        n = self.relaxed.num_atoms
        self._cost: list[float] = [INFINITY] * n
        self._supporter: list[int] = [-1] * n
        self._touched: list[int] = []

    def _fixed_point(self, values) -> None:
        """Dijkstra pass filling cost and best-supporter arrays.

        Supporter ties at equal cost go to the lowest relaxed-operator
        index.  Only touched entries are reset between calls.
        """
        cost = self._cost
        supporter = self._supporter
        for a in self._touched:
            cost[a] = INFINITY
            supporter[a] = -1
        touched = self._touched = []

        relaxed = self.relaxed
        unsatisfied = [len(rop.preconditions) for rop in relaxed.operators]
        accumulated = [1] * len(relaxed.operators)  # 1 = own unit cost
        heap: list[tuple[float, int]] = []

        def reach(atom: int, c: float, rop_index: int) -> None:
            if c < cost[atom]:
                if cost[atom] == INFINITY:
                    touched.append(atom)
                cost[atom] = c
                supporter[atom] = rop_index
                heapq.heappush(heap, (c, atom))
            elif c == cost[atom] and rop_index != -1:
                if supporter[atom] == -1 or rop_index < supporter[atom]:
                    supporter[atom] = rop_index

        for atom in self.task.state_atom_ids(values):
            if cost[atom] != 0:
                touched.append(atom)
                cost[atom] = 0
                heapq.heappush(heap, (0, atom))
        for rop in relaxed.operators:
            if unsatisfied[rop.index] == 0:
                reach(rop.add_atom, 1, rop.index)

        while heap:
            c, atom = heapq.heappop(heap)
            if c > cost[atom]:
                continue
            for rop_index in relaxed.consumers[atom]:
                unsatisfied[rop_index] -= 1
                accumulated[rop_index] += c
                if unsatisfied[rop_index] == 0:
                    rop = relaxed.operators[rop_index]
                    reach(rop.add_atom, accumulated[rop_index], rop_index)

    def hadd(self, values) -> int | float:
        """Additive estimate: sum of atom costs over the goal atoms."""
        self._fixed_point(values)
        total = 0
        for g in self.relaxed.goal_ids:
            c = self._cost[g]
            if c == INFINITY:
                return INFINITY
            total += int(c)
        return total

    def hff(self, values) -> HeuristicReport:
        """Relaxed-plan estimate with preferred operators."""
        self._fixed_point(values)
        cost = self._cost
        if any(cost[g] == INFINITY for g in self.relaxed.goal_ids):
            return HeuristicReport(INFINITY, None, frozenset())

        relaxed = self.relaxed
        plan_rops: set[int] = set()
        marked: set[int] = set()
        stack = [g for g in relaxed.goal_ids if cost[g] > 0]
        marked.update(stack)
        while stack:
            atom = stack.pop()
            rop_index = self._supporter[atom]
            if rop_index in plan_rops:
                continue
            plan_rops.add(rop_index)
            for p in relaxed.operators[rop_index].preconditions:
                if cost[p] > 0 and p not in marked:
                    marked.add(p)
                    stack.append(p)

        plan_ops = frozenset(relaxed.operators[r].op_index for r in plan_rops)
        preferred = frozenset(
            op_index
            for op_index in plan_ops
            if atoms_hold(values, self.task.operators[op_index].preconditions)
        )
        return HeuristicReport(len(plan_ops), plan_ops, preferred)


def hadd(task: Task, values) -> int | float:
    """One-shot additive estimate of a state (convenience wrapper)."""
    return RelaxationEvaluator(task).hadd(values)


def hff(task: Task, values) -> HeuristicReport:
    """One-shot relaxed-plan estimate of a state (convenience wrapper)."""
    return RelaxationEvaluator(task).hff(values)
