"""Independent reference implementations used to check the engine.

Everything here re-derives task semantics directly from the Task data
model (operators, effects, goal) without calling into the search,
relaxation, landmark, or novelty code, so a bug in the engine cannot
hide in its own oracle.
"""

from __future__ import annotations

import itertools
from collections import deque

INF = float("inf")


def _holds(values, atoms) -> bool:
    return all(values[a.var] == a.val for a in atoms)


def successors(task, values):
    """(operator index, successor) pairs in ascending operator order."""
    result = []
    for op in task.operators:
        if not _holds(values, op.preconditions):
            continue
        new_values = list(values)
        for eff in op.effects:
            if _holds(values, eff.conditions):
                new_values[eff.var] = eff.new_val
        result.append((op.index, tuple(new_values)))
    return result


def bfs_plan(task, max_states: int = 200_000):
    """Breadth-first plan or None; explores the full reachable space."""
    start = task.initial_state
    if _holds(start, task.goal):
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        values = queue.popleft()
        for op_index, succ in successors(task, values):
            if succ in parent:
                continue
            parent[succ] = (values, op_index)
            if _holds(succ, task.goal):
                plan = []
                cursor = succ
                while parent[cursor] is not None:
                    prev, op = parent[cursor]
                    plan.append(op)
                    cursor = prev
                plan.reverse()
                return plan
            if len(parent) > max_states:
                raise RuntimeError("state space larger than the oracle bound")
            queue.append(succ)
    return None


def naive_hadd(task, values):
    """Additive estimate by plain iteration to convergence, no priority order."""
    cost = {}
    for var, val in enumerate(values):
        cost[(var, val)] = 0
    changed = True
    while changed:
        changed = False
        for op in task.operators:
            for eff in op.effects:
                pre = list(op.preconditions) + list(eff.conditions)
                total = 1
                for atom in pre:
                    c = cost.get((atom.var, atom.val), INF)
                    if c == INF:
                        total = INF
                        break
                    total += c
                target = (eff.var, eff.new_val)
                if total < cost.get(target, INF):
                    cost[target] = total
                    changed = True
    result = 0
    for atom in task.goal:
        c = cost.get((atom.var, atom.val), INF)
        if c == INF:
            return INF
        result += c
    return result


def relaxed_atoms(task, values, forbidden=None):
    """Delete-free closure of reachable (var, val) facts.

    With `forbidden` set to a (var, val) pair, effects producing that
    fact never fire: the removal-test closure.
    """
    atoms = {(var, val) for var, val in enumerate(values)}
    changed = True
    while changed:
        changed = False
        for op in task.operators:
            if not all((a.var, a.val) in atoms for a in op.preconditions):
                continue
            for eff in op.effects:
                fact = (eff.var, eff.new_val)
                if fact == forbidden or fact in atoms:
                    continue
                if all((c.var, c.val) in atoms for c in eff.conditions):
                    atoms.add(fact)
                    changed = True
    return atoms


def goal_relaxed_reachable(task, values, forbidden=None) -> bool:
    atoms = relaxed_atoms(task, values, forbidden)
    return all((a.var, a.val) in atoms for a in task.goal)


def is_landmark(task, var: int, val: int) -> bool:
    """Definition-level landmark check: true initially, or forbidding the
    fact makes the relaxation unsolvable."""
    if task.initial_state[var] == val:
        return True
    return not goal_relaxed_reachable(task, task.initial_state, forbidden=(var, val))


def delete_free_replay_ok(task, values, plan_ops) -> bool:
    """Closure over the plan's operators only: every plan operator must
    become applicable and the goal atoms must all be reached."""
    ops = [task.operators[i] for i in set(plan_ops)]
    atoms = {(var, val) for var, val in enumerate(values)}
    changed = True
    while changed:
        changed = False
        for op in ops:
            if not all((a.var, a.val) in atoms for a in op.preconditions):
                continue
            for eff in op.effects:
                if all((c.var, c.val) in atoms for c in eff.conditions):
                    fact = (eff.var, eff.new_val)
                    if fact not in atoms:
                        atoms.add(fact)
                        changed = True
    applicable = all(
        all((a.var, a.val) in atoms for a in op.preconditions) for op in ops
    )
    achieved = all((a.var, a.val) in atoms for a in task.goal)
    return applicable and achieved


class NoveltyOracle:
    """Direct evaluation of bounded novelty over the visitation history.

    w is the size of the smallest atom tuple of the queried state that no
    previously queried state under the same key subsumes, saturating at
    bound + 1.  Every query joins the history.
    """

    def __init__(self, bound: int):
        assert bound in (1, 2)
        self.bound = bound
        self._history: dict[tuple, list[frozenset[int]]] = {}

    def query(self, atom_ids, key: tuple = ()) -> int:
        atoms = frozenset(atom_ids)
        seen = self._history.setdefault(key, [])
        result = self.bound + 1
        for size in range(1, self.bound + 1):
            found = False
            for combo in itertools.combinations(sorted(atoms), size):
                subset = frozenset(combo)
                if not any(subset <= previous for previous in seen):
                    found = True
                    break
            if found:
                result = size
                break
        seen.append(atoms)
        return result
