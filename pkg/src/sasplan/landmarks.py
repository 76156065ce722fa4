"""Fact landmarks of the delete relaxation and the landmark-count heuristic.

The generator backchains from the goal atoms: for a candidate atom L not
true initially, the first achievers F(L) are the relaxed operators adding
L that are applicable in a relaxed exploration forbidding L; every atom
in the intersection of their preconditions is a landmark, ordered
greedy-necessarily before L.  Candidates iterate to a fixed point and
every landmark is then verified by the removal test (the relaxation must
become unsolvable once all achievers of the atom are removed); failures
are dropped.

This is deliberately simpler than full landmark generators: no
disjunctive landmarks and no reasonable orderings.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .relaxation import RelaxedTask
from .sas import Atom, Task, atoms_hold


def relaxed_reachable_atoms(relaxed: RelaxedTask, values, forbidden_atom: int | None = None) -> bytearray:
    """Atoms reachable under the delete relaxation from `values`.

    With `forbidden_atom` set, operators adding that atom are never
    applied (the atom stays unreached unless true in `values`).
    Returns a byte per atom, 1 = reached.
    """
    reached = bytearray(relaxed.num_atoms)
    unsatisfied = [len(rop.preconditions) for rop in relaxed.operators]
    queue = deque()
    for atom in relaxed.task.state_atom_ids(values):
        if not reached[atom]:
            reached[atom] = 1
            queue.append(atom)
    for rop in relaxed.operators:
        if unsatisfied[rop.index] == 0 and rop.add_atom != forbidden_atom:
            if not reached[rop.add_atom]:
                reached[rop.add_atom] = 1
                queue.append(rop.add_atom)
    while queue:
        atom = queue.popleft()
        for rop_index in relaxed.consumers[atom]:
            unsatisfied[rop_index] -= 1
            if unsatisfied[rop_index] == 0:
                rop = relaxed.operators[rop_index]
                add = rop.add_atom
                if add != forbidden_atom and not reached[add]:
                    reached[add] = 1
                    queue.append(add)
    return reached


@dataclass(frozen=True)
class LandmarkGraph:
    """Verified fact landmarks with greedy-necessary orderings.

    `parents[i]` lists the landmark indices that must be accepted before
    landmark i can be accepted; `is_goal[i]` marks goal atoms.
    """

    task: Task
    atoms: tuple[Atom, ...]
    atom_ids: tuple[int, ...]
    is_goal: tuple[bool, ...]
    parents: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.atoms)

    def index_of(self, atom: Atom) -> int:
        return self.atoms.index(atom)

    def dump(self) -> str:
        """One landmark per line: `var=val [goal] parents: ...`."""
        lines = []
        for i, atom in enumerate(self.atoms):
            name = self.task.atom_name(atom)
            goal_tag = " [goal]" if self.is_goal[i] else ""
            if self.parents[i]:
                parent_names = ", ".join(self.task.atom_name(self.atoms[p]) for p in self.parents[i])
            else:
                parent_names = "-"
            lines.append(f"{name}{goal_tag} parents: {parent_names}")
        return "\n".join(lines) + "\n"


def generate_landmark_graph(task: Task, relaxed: RelaxedTask | None = None) -> LandmarkGraph:
    """Backchain landmark candidates and keep those passing the removal test."""
    relaxed = relaxed or RelaxedTask(task)
    init = task.initial_state

    order: list[int] = []  # atom ids in discovery order
    parents: dict[int, set[int]] = {}
    pending = deque()
    for atom in task.goal:
        gid = task.atom_id(atom.var, atom.val)
        parents[gid] = set()
        order.append(gid)
        pending.append(gid)

    processed: set[int] = set()
    while pending:
        lm = pending.popleft()
        if lm in processed:
            continue
        processed.add(lm)
        var, val = task.atom_from_id(lm)
        if init[var] == val:
            continue  # trivially true; nothing to backchain
        reached = relaxed_reachable_atoms(relaxed, init, forbidden_atom=lm)
        first_achievers = [
            relaxed.operators[rop_index]
            for rop_index in relaxed.achievers[lm]
            if all(reached[p] for p in relaxed.operators[rop_index].preconditions)
        ]
        if not first_achievers:
            continue  # atom not relaxed-reachable at all
        common = set(first_achievers[0].preconditions)
        for rop in first_achievers[1:]:
            common &= set(rop.preconditions)
        for parent in sorted(common):
            if parent not in parents:
                parents[parent] = set()
                order.append(parent)
                pending.append(parent)
            parents[lm].add(parent)

    # Removal test: forbidding the atom must make the relaxation
    # unsolvable.  Goal atoms are landmarks by definition and always kept;
    # other initially-true candidates never pass (they have nothing to
    # remove) and are dropped along with their orderings.
    goal_ids = {task.atom_id(a.var, a.val) for a in task.goal}
    verified: list[int] = []
    for lm in order:
        if lm in goal_ids:
            verified.append(lm)
            continue
        var, val = task.atom_from_id(lm)
        if init[var] == val:
            continue
        reached = relaxed_reachable_atoms(relaxed, init, forbidden_atom=lm)
        if not all(reached[g] for g in goal_ids):
            verified.append(lm)

    index = {lm: i for i, lm in enumerate(verified)}
    kept_parents = tuple(
        tuple(sorted(index[p] for p in parents[lm] if p in index)) for lm in verified
    )
    return LandmarkGraph(
        task=task,
        atoms=tuple(task.atom_from_id(lm) for lm in verified),
        atom_ids=tuple(verified),
        is_goal=tuple(lm in goal_ids for lm in verified),
        parents=kept_parents,
    )


class LandmarkCountEvaluator:
    """Path-dependent landmark counting over a fixed graph.

    A status is an int bit set of accepted landmarks.  The stored set is
    monotone along a path; goal landmarks currently false only raise the
    reported value (they are counted as required again), they are not
    erased from the stored set, so later acceptances never lose their
    parents.
    """

    def __init__(self, graph: LandmarkGraph):
        self.graph = graph
        self._parent_masks = tuple(
            sum(1 << p for p in parents) for parents in graph.parents
        )
        self._goal_mask = sum(1 << i for i, g in enumerate(graph.is_goal) if g)

    def _holds(self, i: int, values) -> bool:
        atom = self.graph.atoms[i]
        return values[atom.var] == atom.val

    def initial_status(self, values) -> int:
        """Accept atoms true initially; they never carry parents."""
        accepted = 0
        changed = True
        while changed:
            changed = False
            for i in range(len(self.graph)):
                bit = 1 << i
                if accepted & bit:
                    continue
                if self._holds(i, values) and self._parent_masks[i] & ~accepted == 0:
                    accepted |= bit
                    changed = True
        return accepted

    def evaluate(self, parent_status: int, values) -> tuple[int, int]:
        """Return (value, child status) for a state reached from `parent_status`.

        A landmark is newly accepted when it holds in the state and all
        its greedy-necessary parents were accepted at the parent.
        """
        accepted = parent_status
        for i in range(len(self.graph)):
            bit = 1 << i
            if accepted & bit:
                continue
            if self._parent_masks[i] & ~parent_status:
                continue
            if self._holds(i, values):
                accepted |= bit
        required_again = 0
        goal_accepted = accepted & self._goal_mask
        while goal_accepted:
            bit = goal_accepted & -goal_accepted
            goal_accepted ^= bit
            if not self._holds(bit.bit_length() - 1, values):
                required_again += 1
        value = len(self.graph) - accepted.bit_count() + required_again
        return value, accepted

    def preferred_operators(self, status: int, values) -> frozenset[int]:
        """Applicable operators achieving a ready, unaccepted landmark.

        Ready means all greedy-necessary parents are accepted.  An effect
        counts only if its conditions hold in the state.
        """
        ready_atoms = {
            self.graph.atom_ids[i]
            for i in range(len(self.graph))
            if not status & (1 << i) and self._parent_masks[i] & ~status == 0
        }
        if not ready_atoms:
            return frozenset()
        task = self.graph.task
        preferred = set()
        for op in task.operators:
            if not atoms_hold(values, op.preconditions):
                continue
            for eff in op.effects:
                if not atoms_hold(values, eff.conditions):
                    continue
                if task.atom_id(eff.var, eff.new_val) in ready_atoms:
                    preferred.add(op.index)
                    break
        return frozenset(preferred)


def hlm(graph: LandmarkGraph, parent_status: int, values) -> tuple[int, int]:
    """One-shot landmark count (convenience wrapper)."""
    return LandmarkCountEvaluator(graph).evaluate(parent_status, values)


def lm_preferred(graph: LandmarkGraph, status: int, task: Task, values) -> frozenset[int]:
    """One-shot landmark preferred operators (convenience wrapper)."""
    assert task is graph.task
    return LandmarkCountEvaluator(graph).preferred_operators(status, values)
