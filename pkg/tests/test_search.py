"""Successor semantics, registry, driver contract, and plan validation."""

import dataclasses

import pytest

from sasplan import lazy_gbfs, validate_plan
from sasplan.search import (
    EXHAUSTED,
    EXPANSION_LIMIT,
    MEMORY_LIMIT,
    SOLVED,
    TIME_LIMIT,
    UNSOLVABLE,
    InapplicableOperator,
    MemoryLimitExceeded,
    SearchLimits,
    StateRegistry,
    applicable_operators,
    apply_operator,
)

import oracles
import taskgen

CONFIGS = ["lama", "bfws-f2", "bfws-f4", "bfws-f6", "nolan"]


def stats_key(result):
    """Everything that must be identical across reruns."""
    fields = dataclasses.asdict(result.statistics)
    fields.pop("wall_seconds")
    return (result.outcome, result.plan, result.expanded_states, fields)


def test_applicable_operators(chain_task, pair_task):
    assert applicable_operators(chain_task, (0,)) == [0]
    assert applicable_operators(chain_task, (2,)) == []
    assert applicable_operators(pair_task, (0, 0)) == [0, 1]


def test_apply_operator(chain_task, pair_task):
    assert apply_operator(chain_task, (0,), 0) == (1,)
    assert apply_operator(pair_task, (0, 0), 1) == (0, 1)
    with pytest.raises(InapplicableOperator):
        apply_operator(chain_task, (0,), 1)


def test_apply_operator_is_pure(pair_task):
    values = (0, 0)
    apply_operator(pair_task, values, 0)
    assert values == (0, 0)
    assert apply_operator(pair_task, values, 0) == apply_operator(pair_task, values, 0)


def test_unmet_effect_condition_leaves_variable(conditional_task):
    # maybe-light has no preconditions; its effect needs switch=up
    assert apply_operator(conditional_task, (0, 0), 1) == (0, 0)
    assert apply_operator(conditional_task, (1, 0), 1) == (1, 1)


def test_registry_interning():
    registry = StateRegistry(num_variables=2)
    sid, new = registry.register((0, 0))
    assert (sid, new) == (0, True)
    assert registry.register((0, 0)) == (0, False)
    assert registry.register((0, 1)) == (1, True)
    assert registry.register((1, 0)) == (2, True)
    assert registry[1] == (0, 1)
    assert len(registry) == 3


def test_registry_memory_budget():
    registry = StateRegistry(num_variables=2, memory_limit_bytes=600)
    registry.register((0, 0))
    registry.register((0, 1))
    with pytest.raises(MemoryLimitExceeded):
        registry.register((1, 0))


def test_chain_trace(chain_task):
    result = lazy_gbfs(chain_task, "nolan")
    assert result.outcome == SOLVED
    assert result.plan == [0, 1]
    assert result.statistics.expansions == 2
    assert result.expanded_states == [0, 1]
    assert result.statistics.evaluations["hff"] == 3
    assert validate_plan(chain_task, result.plan)


def test_chain_unsolvable(unsolvable_task):
    result = lazy_gbfs(unsolvable_task, "lama")
    assert result.outcome == UNSOLVABLE
    assert result.plan is None
    assert result.statistics.expansions == 0


def test_pair_plan_length(pair_task):
    result = lazy_gbfs(pair_task, "lama")
    assert result.outcome == SOLVED
    assert len(result.plan) == 2
    assert validate_plan(pair_task, result.plan)


def test_goal_at_root():
    import random

    from sasplan import Atom, Task

    base = taskgen.random_task(random.Random(1))
    task = Task(
        variables=base.variables,
        operators=base.operators,
        initial_state=base.initial_state,
        goal=(Atom(0, base.initial_state[0]),),
    )
    result = lazy_gbfs(task, "nolan")
    assert result.outcome == SOLVED
    assert result.plan == []
    assert result.statistics.expansions == 0


def test_conditional_task_duplicate_successors(conditional_task):
    # applying maybe-light at the root regenerates the root; the duplicate
    # must not be re-inserted
    result = lazy_gbfs(conditional_task, "nolan")
    assert result.outcome == SOLVED
    assert result.plan == [0, 1]
    stats = result.statistics
    assert stats.expansions <= stats.generated <= stats.registered_peak


def test_validate_plan_examples(chain_task):
    assert validate_plan(chain_task, [0, 1])
    bad_order = validate_plan(chain_task, [1])
    assert not bad_order
    assert bad_order.failed_step == 0
    short = validate_plan(chain_task, [0])
    assert not short
    assert short.failed_step is None
    assert "goal" in short.reason


@pytest.mark.parametrize("config", CONFIGS + ["lama-w-f2-lm", "lama-w-w", "alt:f2hlm"])
def test_determinism_on_fixtures(config, chain_task, pair_task, conditional_task, unsolvable_task):
    for task in (chain_task, pair_task, conditional_task, unsolvable_task):
        first = lazy_gbfs(task, config)
        second = lazy_gbfs(task, config)
        assert stats_key(first) == stats_key(second)


def test_expansion_limit(pair_task):
    result = lazy_gbfs(pair_task, "lama", SearchLimits(max_expansions=1))
    assert result.outcome == EXPANSION_LIMIT
    assert result.statistics.expansions == 1
    assert result.plan is None


def test_time_limit(pair_task):
    result = lazy_gbfs(pair_task, "lama", SearchLimits(time_seconds=0.0))
    assert result.outcome == TIME_LIMIT


def test_memory_limit(pair_task):
    result = lazy_gbfs(pair_task, "lama", SearchLimits(memory_bytes=700))
    assert result.outcome == MEMORY_LIMIT


def test_exhaustion_without_relaxed_proof():
    """Relaxed-reachable but really unreachable goal: the search runs dry
    without claiming an unsolvability proof."""
    from sasplan import Atom, Effect, Operator, Task, Variable

    # two consumers of a one-shot resource: relaxation thinks both goals
    # are reachable, the real task cannot do both
    task = Task(
        variables=(
            Variable(0, "x", 2, ("0", "1")),
            Variable(1, "y", 2, ("0", "1")),
            Variable(2, "free", 2, ("yes", "no")),
        ),
        operators=(
            Operator(0, "take-x", (Atom(2, 0),), (Effect((), 0, 1), Effect((), 2, 1)), 1),
            Operator(1, "take-y", (Atom(2, 0),), (Effect((), 1, 1), Effect((), 2, 1)), 1),
        ),
        initial_state=(0, 0, 0),
        goal=(Atom(0, 1), Atom(1, 1)),
    )
    assert oracles.goal_relaxed_reachable(task, task.initial_state)
    assert oracles.bfs_plan(task) is None
    result = lazy_gbfs(task, "lama")
    assert result.outcome == EXHAUSTED


def test_search_invariants_on_random_tasks():
    for task in taskgen.suite_tasks(seed=71, count=20):
        oracle_plan = oracles.bfs_plan(task)
        for config in ("lama", "nolan"):
            result = lazy_gbfs(task, config)
            stats = result.statistics
            assert stats.expansions <= stats.generated <= stats.registered_peak
            if oracle_plan is None:
                assert result.outcome in (UNSOLVABLE, EXHAUSTED)
            else:
                assert result.outcome == SOLVED
                assert validate_plan(task, result.plan)
