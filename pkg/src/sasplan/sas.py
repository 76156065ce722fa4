"""SAS+ task model and parser.

Consumes translated planning tasks in the SAS+ file format, version 3
(the format emitted by the usual PDDL-to-SAS+ translators), validates
them, and provides the immutable :class:`Task` model plus a dense global
numbering of atoms (variable=value pairs).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

SAS_VERSION = 3


class SasError(Exception):
    """Base class for problems with a SAS+ task."""


class SasSyntaxError(SasError):
    """Malformed section, count mismatch, or truncated input."""


class UnsupportedFeature(SasError):
    """Well-formed input using a feature this engine rejects.

    Raised for axioms, derived variables (axiom_layer != -1), and format
    versions other than 3.
    """


class SasRangeError(SasError):
    """Variable or value index out of range."""


class Atom(NamedTuple):
    """A fact: variable `var` has value `val`."""

    var: int
    val: int


@dataclass(frozen=True)
class Variable:
    index: int
    name: str
    domain_size: int
    value_names: tuple[str, ...]


@dataclass(frozen=True)
class Effect:
    """One operator effect: if all `conditions` hold, `var` becomes `new_val`."""

    conditions: tuple[Atom, ...]
    var: int
    new_val: int


@dataclass(frozen=True)
class Operator:
    index: int
    name: str
    preconditions: tuple[Atom, ...]  # at most one per variable, sorted by var
    effects: tuple[Effect, ...]
    cost: int


def atoms_hold(values, atoms) -> bool:
    """True iff every atom in `atoms` holds in the full assignment `values`."""
    return all(values[a.var] == a.val for a in atoms)


@dataclass(frozen=True)
class Task:
    """Immutable SAS+ planning task.

    `initial_state` assigns every variable a value; `goal` holds at most
    one atom per variable.  Mutex groups are retained for completeness but
    are never consulted by search.  Operator costs are parsed and kept for
    reporting; search and heuristics treat every operator as unit cost.
    """

    variables: tuple[Variable, ...]
    operators: tuple[Operator, ...]
    initial_state: tuple[int, ...]
    goal: tuple[Atom, ...]
    metric_flag: bool = False
    mutex_groups: tuple[tuple[Atom, ...], ...] = ()
    _atom_offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        offsets = []
        total = 0
        for i, var in enumerate(self.variables):
            if var.index != i:
                raise SasSyntaxError(f"variable {var.name} has index {var.index}, expected {i}")
            if var.domain_size < 1:
                raise SasSyntaxError(f"variable {var.name} has empty domain")
            if len(var.value_names) != var.domain_size:
                raise SasSyntaxError(
                    f"variable {var.name}: {len(var.value_names)} value names "
                    f"for domain size {var.domain_size}"
                )
            offsets.append(total)
            total += var.domain_size
        object.__setattr__(self, "_atom_offsets", tuple(offsets))

        if len(self.initial_state) != len(self.variables):
            raise SasSyntaxError("initial state does not assign every variable")
        for var, val in enumerate(self.initial_state):
            self._check_atom(Atom(var, val), "initial state")
        seen_goal_vars = set()
        for atom in self.goal:
            self._check_atom(atom, "goal")
            if atom.var in seen_goal_vars:
                raise SasSyntaxError(f"goal constrains variable {atom.var} twice")
            seen_goal_vars.add(atom.var)
        for i, op in enumerate(self.operators):
            if op.index != i:
                raise SasSyntaxError(f"operator {op.name} has index {op.index}, expected {i}")
            if op.cost < 0:
                raise SasSyntaxError(f"operator {op.name} has negative cost")
            seen_pre_vars = set()
            for atom in op.preconditions:
                self._check_atom(atom, f"operator {op.name}")
                if atom.var in seen_pre_vars:
                    raise SasSyntaxError(f"operator {op.name} has two preconditions on variable {atom.var}")
                seen_pre_vars.add(atom.var)
            for eff in op.effects:
                self._check_atom(Atom(eff.var, eff.new_val), f"operator {op.name}")
                for cond in eff.conditions:
                    self._check_atom(cond, f"operator {op.name}")

    def _check_atom(self, atom: Atom, where: str) -> None:
        if not 0 <= atom.var < len(self.variables):
            raise SasRangeError(f"{where}: variable index {atom.var} out of range")
        if not 0 <= atom.val < self.variables[atom.var].domain_size:
            raise SasRangeError(
                f"{where}: value {atom.val} out of range for variable "
                f"{self.variables[atom.var].name}"
            )

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_atoms(self) -> int:
        """Total atom count A = sum of all domain sizes."""
        if not self.variables:
            return 0
        return self._atom_offsets[-1] + self.variables[-1].domain_size

    def atom_id(self, var: int, val: int) -> int:
        """Dense global id of atom (var, val): prefix sum of domain sizes plus val."""
        self._check_atom(Atom(var, val), "atom_id")
        return self._atom_offsets[var] + val

    def atom_from_id(self, atom_id: int) -> Atom:
        """Inverse of :meth:`atom_id`."""
        if not 0 <= atom_id < self.num_atoms:
            raise SasRangeError(f"atom id {atom_id} out of range")
        var = bisect_right(self._atom_offsets, atom_id) - 1
        return Atom(var, atom_id - self._atom_offsets[var])

    def state_atom_ids(self, values) -> list[int]:
        """Global atom ids of a full assignment, ascending."""
        offsets = self._atom_offsets
        return [offsets[var] + val for var, val in enumerate(values)]

    def goal_satisfied(self, values) -> bool:
        return atoms_hold(values, self.goal)

    def atom_name(self, atom: Atom) -> str:
        var = self.variables[atom.var]
        return f"{var.name}={var.value_names[atom.val]}"


class _Lines:
    """Line cursor over the raw task text with positioned errors."""

    def __init__(self, text: str):
        self._lines = text.splitlines()
        self._pos = 0

    def next(self) -> str:
        while self._pos < len(self._lines):
            line = self._lines[self._pos].strip()
            self._pos += 1
            if line:
                return line
        raise SasSyntaxError("unexpected end of input")

    def expect(self, token: str) -> None:
        line = self.next()
        if line != token:
            raise SasSyntaxError(f"line {self._pos}: expected '{token}', got '{line}'")

    def next_int(self, what: str) -> int:
        line = self.next()
        try:
            return int(line)
        except ValueError:
            raise SasSyntaxError(f"line {self._pos}: expected {what}, got '{line}'") from None

    def next_ints(self, what: str) -> list[int]:
        line = self.next()
        try:
            return [int(tok) for tok in line.split()]
        except ValueError:
            raise SasSyntaxError(f"line {self._pos}: expected {what}, got '{line}'") from None

    def at_end(self) -> bool:
        while self._pos < len(self._lines):
            if self._lines[self._pos].strip():
                return False
            self._pos += 1
        return True


def parse_sas(text: str | bytes) -> Task:
    """Parse a complete SAS+ version-3 file into a validated :class:`Task`.

    Rejects axioms and derived variables with :class:`UnsupportedFeature`,
    other format versions likewise, out-of-range values with
    :class:`SasRangeError`, and anything structurally malformed with
    :class:`SasSyntaxError`.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = _Lines(text)

    lines.expect("begin_version")
    version = lines.next_int("format version")
    if version != SAS_VERSION:
        raise UnsupportedFeature(f"SAS+ format version {version} not supported (want {SAS_VERSION})")
    lines.expect("end_version")

    lines.expect("begin_metric")
    metric = lines.next_int("metric flag")
    if metric not in (0, 1):
        raise SasSyntaxError(f"metric flag must be 0 or 1, got {metric}")
    lines.expect("end_metric")

    num_vars = lines.next_int("variable count")
    variables = []
    for i in range(num_vars):
        lines.expect("begin_variable")
        name = lines.next()
        axiom_layer = lines.next_int("axiom layer")
        if axiom_layer != -1:
            raise UnsupportedFeature(f"variable {name} is derived (axiom_layer {axiom_layer})")
        domain_size = lines.next_int("domain size")
        if domain_size < 1:
            raise SasSyntaxError(f"variable {name} has domain size {domain_size}")
        value_names = tuple(lines.next() for _ in range(domain_size))
        lines.expect("end_variable")
        variables.append(Variable(i, name, domain_size, value_names))

    def check_pair(var: int, val: int, where: str) -> Atom:
        if not 0 <= var < num_vars:
            raise SasRangeError(f"{where}: variable index {var} out of range")
        if not 0 <= val < variables[var].domain_size:
            raise SasRangeError(f"{where}: value {val} out of range for variable {variables[var].name}")
        return Atom(var, val)

    num_mutexes = lines.next_int("mutex group count")
    mutex_groups = []
    for _ in range(num_mutexes):
        lines.expect("begin_mutex_group")
        num_facts = lines.next_int("mutex fact count")
        group = []
        for _ in range(num_facts):
            pair = lines.next_ints("mutex fact")
            if len(pair) != 2:
                raise SasSyntaxError("mutex fact is not a 'var val' pair")
            group.append(check_pair(pair[0], pair[1], "mutex group"))
        lines.expect("end_mutex_group")
        mutex_groups.append(tuple(group))

    lines.expect("begin_state")
    initial = tuple(
        check_pair(var, lines.next_int("initial value"), "initial state").val
        for var in range(num_vars)
    )
    lines.expect("end_state")

    lines.expect("begin_goal")
    num_goals = lines.next_int("goal count")
    goal = []
    for _ in range(num_goals):
        pair = lines.next_ints("goal pair")
        if len(pair) != 2:
            raise SasSyntaxError("goal entry is not a 'var val' pair")
        goal.append(check_pair(pair[0], pair[1], "goal"))
    lines.expect("end_goal")

    num_ops = lines.next_int("operator count")
    operators = []
    for op_index in range(num_ops):
        lines.expect("begin_operator")
        name = lines.next()
        preconditions: dict[int, int] = {}

        def add_precondition(var: int, val: int) -> None:
            check_pair(var, val, f"operator {name}")
            if preconditions.setdefault(var, val) != val:
                raise SasSyntaxError(f"operator {name}: conflicting preconditions on variable {var}")

        num_prevail = lines.next_int("prevail count")
        for _ in range(num_prevail):
            pair = lines.next_ints("prevail condition")
            if len(pair) != 2:
                raise SasSyntaxError(f"operator {name}: prevail is not a 'var val' pair")
            add_precondition(pair[0], pair[1])

        num_effects = lines.next_int("effect count")
        if num_effects < 1:
            raise SasSyntaxError(f"operator {name} has no effects")
        effects = []
        for _ in range(num_effects):
            nums = lines.next_ints("effect line")
            if not nums:
                raise SasSyntaxError(f"operator {name}: empty effect line")
            num_conds = nums[0]
            if len(nums) != 1 + 2 * num_conds + 3:
                raise SasSyntaxError(f"operator {name}: malformed effect line")
            conds = tuple(
                check_pair(nums[1 + 2 * i], nums[2 + 2 * i], f"operator {name}")
                for i in range(num_conds)
            )
            var, pre, post = nums[1 + 2 * num_conds:]
            if pre != -1:
                add_precondition(var, pre)
            effects.append(Effect(conds, check_pair(var, post, f"operator {name}").var, post))

        cost = lines.next_int("operator cost")
        if cost < 0:
            raise SasSyntaxError(f"operator {name} has negative cost")
        lines.expect("end_operator")
        operators.append(
            Operator(
                op_index,
                name,
                tuple(Atom(var, val) for var, val in sorted(preconditions.items())),
                tuple(effects),
                cost,
            )
        )

    num_axioms = lines.next_int("axiom count")
    if num_axioms != 0:
        raise UnsupportedFeature(f"task has {num_axioms} axiom(s); derived predicates are not supported")
    if not lines.at_end():
        raise SasSyntaxError("trailing content after axiom section")

    return Task(
        variables=tuple(variables),
        operators=tuple(operators),
        initial_state=initial,
        goal=tuple(goal),
        metric_flag=bool(metric),
        mutex_groups=tuple(mutex_groups),
    )


def load_sas(path) -> Task:
    """Read and parse a SAS+ file from disk."""
    with open(path, "rb") as f:
        return parse_sas(f.read())


def dump_sas(task: Task) -> str:
    """Serialize a task back to normalized SAS+ v3 text.

    Preconditions on effect variables are folded into the effect lines'
    pre slots; re-parsing the output yields a task equal to the input.
    """
    out: list[str] = []
    out += ["begin_version", str(SAS_VERSION), "end_version"]
    out += ["begin_metric", str(int(task.metric_flag)), "end_metric"]
    out.append(str(task.num_variables))
    for var in task.variables:
        out += ["begin_variable", var.name, "-1", str(var.domain_size)]
        out += list(var.value_names)
        out.append("end_variable")
    out.append(str(len(task.mutex_groups)))
    for group in task.mutex_groups:
        out += ["begin_mutex_group", str(len(group))]
        out += [f"{a.var} {a.val}" for a in group]
        out.append("end_mutex_group")
    out.append("begin_state")
    out += [str(val) for val in task.initial_state]
    out.append("end_state")
    out.append("begin_goal")
    goal = sorted(task.goal)
    out.append(str(len(goal)))
    out += [f"{a.var} {a.val}" for a in goal]
    out.append("end_goal")
    out.append(str(len(task.operators)))
    for op in task.operators:
        out += ["begin_operator", op.name]
        pre = {a.var: a.val for a in op.preconditions}
        effect_vars = {eff.var for eff in op.effects}
        prevail = [a for a in op.preconditions if a.var not in effect_vars]
        out.append(str(len(prevail)))
        out += [f"{a.var} {a.val}" for a in prevail]
        out.append(str(len(op.effects)))
        for eff in op.effects:
            parts = [str(len(eff.conditions))]
            for cond in eff.conditions:
                parts += [str(cond.var), str(cond.val)]
            parts += [str(eff.var), str(pre.get(eff.var, -1)), str(eff.new_val)]
            out.append(" ".join(parts))
        out.append(str(op.cost))
        out.append("end_operator")
    out.append("0")
    return "\n".join(out) + "\n"


def iter_atoms(task: Task) -> Iterable[tuple[int, Atom]]:
    """Yield (global id, atom) pairs in global-id order."""
    gid = 0
    for var in task.variables:
        for val in range(var.domain_size):
            yield gid, Atom(var.index, val)
            gid += 1
