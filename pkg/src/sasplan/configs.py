"""Named planner configurations compiled into declarative open-list policies.

A policy is an ordered list of sublist specs.  Each sublist is keyed by a
recipe of components drawn from: heuristic values (`hff`, `hlm`, taken
from the parent's cache under deferred evaluation), a preferred-operator
indicator (entering keys as 1 - pref so preferred entries sort first),
and novelty components `w{...}` partitioned by heuristic values.  Every
key implicitly ends with the path length g; FIFO breaks remaining ties.

Besides the named configurations there is an explicit sublist grammar
`alt:<atom>,<atom>,...` over the atoms hff, hff+, hlm, hlm+ and f2hlm,
which must include f2hlm; its 16 subsets over the first four atoms cover
the open-list ablations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .open_lists import DEFAULT_BOOST


class UnknownConfig(ValueError):
    """Configuration name that does not compile to a policy."""


@dataclass(frozen=True)
class ValueComponent:
    """Key component: a cached heuristic value ('hff' or 'hlm')."""

    name: str

    def label(self) -> str:
        return self.name


@dataclass(frozen=True)
class PrefComponent:
    """Key component 1 - pref: preferred entries sort first."""

    def label(self) -> str:
        return "1-pref"


@dataclass(frozen=True)
class NoveltyComponent:
    """Key component: novelty under the given partition heuristics."""

    partition: tuple[str, ...]

    def label(self) -> str:
        return "w{" + ",".join(self.partition) + "}"


Component = ValueComponent | PrefComponent | NoveltyComponent


@dataclass(frozen=True)
class SublistSpec:
    components: tuple[Component, ...]
    preferred_only: bool = False


@dataclass(frozen=True)
class PolicySpec:
    name: str
    sublists: tuple[SublistSpec, ...]
    boost_amount: int  # 0 = no boosting (single-sublist policies)

    @property
    def uses_hlm(self) -> bool:
        for sub in self.sublists:
            for comp in sub.components:
                if isinstance(comp, ValueComponent) and comp.name == "hlm":
                    return True
                if isinstance(comp, NoveltyComponent) and "hlm" in comp.partition:
                    return True
        return False

    @property
    def needs_pref(self) -> bool:
        return any(
            sub.preferred_only or any(isinstance(c, PrefComponent) for c in sub.components)
            for sub in self.sublists
        )

    def novelty_components(self) -> list[tuple[int, int, NoveltyComponent]]:
        """All (sublist index, component position, component) triples."""
        found = []
        for i, sub in enumerate(self.sublists):
            for j, comp in enumerate(sub.components):
                if isinstance(comp, NoveltyComponent):
                    found.append((i, j, comp))
        return found


def _hff() -> ValueComponent:
    return ValueComponent("hff")


def _hlm() -> ValueComponent:
    return ValueComponent("hlm")


_LAMA_SUBLISTS = (
    SublistSpec((_hff(),)),
    SublistSpec((_hff(),), preferred_only=True),
    SublistSpec((_hlm(),)),
    SublistSpec((_hlm(),), preferred_only=True),
)

_F6 = SublistSpec(
    (
        NoveltyComponent(("hlm", "hff")),
        PrefComponent(),
        _hlm(),
        NoveltyComponent(("hff",)),
        _hff(),
    )
)
_F4 = SublistSpec((NoveltyComponent(("hlm", "hff")), _hlm(), _hff()))
_F2_FF = SublistSpec((NoveltyComponent(("hff",)), _hff()))
_F2_LM = SublistSpec((NoveltyComponent(("hlm",)), _hlm()))
_W_FF = SublistSpec((NoveltyComponent(("hff",)),))
_W_LM = SublistSpec((NoveltyComponent(("hlm",)),))
_W_PLAIN = SublistSpec((NoveltyComponent(()),))

_NAMED: dict[str, tuple[SublistSpec, ...]] = {
    "lama": _LAMA_SUBLISTS,
    "bfws-f2": (_F2_FF,),
    "bfws-f4": (_F4,),
    "bfws-f6": (_F6,),
    "lama-w-f6": _LAMA_SUBLISTS + (_F6,),
    "lama-w-f4": _LAMA_SUBLISTS + (_F4,),
    "lama-w-f2-ff": _LAMA_SUBLISTS + (_F2_FF,),
    "lama-w-f2-lm": _LAMA_SUBLISTS + (_F2_LM,),
    "lama-w-wff": _LAMA_SUBLISTS + (_W_FF,),
    "lama-w-wlm": _LAMA_SUBLISTS + (_W_LM,),
    "lama-w-w": _LAMA_SUBLISTS + (_W_PLAIN,),
    "nolan": (
        SublistSpec((_hff(),)),
        SublistSpec((_hff(),), preferred_only=True),
        SublistSpec((_hlm(),), preferred_only=True),
        _F2_LM,
    ),
}

KNOWN_CONFIG_NAMES = tuple(_NAMED)

ABLATION_PREFIX = "alt:"

_ABLATION_ATOMS: dict[str, SublistSpec] = {
    "hff": SublistSpec((_hff(),)),
    "hff+": SublistSpec((_hff(),), preferred_only=True),
    "hlm": SublistSpec((_hlm(),)),
    "hlm+": SublistSpec((_hlm(),), preferred_only=True),
    "f2hlm": _F2_LM,
}


def compile_policy(name: str) -> PolicySpec:
    """Compile a configuration name into its policy spec.

    Raises :class:`UnknownConfig` for unrecognized names and for `alt:`
    lists that omit the mandatory f2hlm sublist.
    """
    if name in _NAMED:
        sublists = _NAMED[name]
        boost = DEFAULT_BOOST if len(sublists) > 1 else 0
        return PolicySpec(name, sublists, boost)
    if name.startswith(ABLATION_PREFIX):
        atoms = [tok.strip() for tok in name[len(ABLATION_PREFIX):].split(",") if tok.strip()]
        if not atoms:
            raise UnknownConfig(f"empty sublist grammar in {name!r}")
        unknown = [a for a in atoms if a not in _ABLATION_ATOMS]
        if unknown:
            raise UnknownConfig(f"unknown sublist atom(s) {unknown} in {name!r}")
        if len(set(atoms)) != len(atoms):
            raise UnknownConfig(f"duplicate sublist atom in {name!r}")
        if "f2hlm" not in atoms:
            raise UnknownConfig(f"{name!r} must include the f2hlm sublist")
        sublists = tuple(_ABLATION_ATOMS[a] for a in atoms)
        return PolicySpec(name, sublists, DEFAULT_BOOST if len(sublists) > 1 else 0)
    raise UnknownConfig(f"unknown configuration {name!r}")


def dump_policy(spec: PolicySpec) -> str:
    """Structural dump for golden-text comparison."""
    lines = [f"policy {spec.name}"]
    lines.append(f"boost {spec.boost_amount}" if spec.boost_amount else "no boosting")
    for i, sub in enumerate(spec.sublists):
        labels = [c.label() for c in sub.components] + ["g"]
        admits = "preferred-only" if sub.preferred_only else "all"
        lines.append(f"sublist {i}: key <{', '.join(labels)}>; admits {admits}")
    return "\n".join(lines) + "\n"
