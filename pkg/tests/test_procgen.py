import random

import pytest

from actions import is_valid_plan
from domain_factories import DOMAINS
from procgen import generate_problem, goal_predicates, random_walk
import exceptions


@pytest.mark.parametrize("name", sorted(DOMAINS))
def test_generated_problem_is_consistent(name):
    generated = generate_problem(name, random.Random(42))
    assert 3 <= len(generated.goals) <= 6
    assert generated.real_goal in generated.goals
    assert generated.instance.goal == generated.real_goal
    assert generated.plan
    assert is_valid_plan(generated.instance.initial, generated.plan, generated.real_goal)
    for goal in generated.goals:
        assert {fact.predicate for fact in goal} <= set(goal_predicates[name])
        assert not goal <= generated.instance.initial.facts
        for other in generated.goals:
            assert goal == other or not (goal <= other or other <= goal)


@pytest.mark.parametrize("name", sorted(DOMAINS))
def test_generation_is_seeded(name):
    first = generate_problem(name, random.Random(7))
    second = generate_problem(name, random.Random(7))
    assert first.goals == second.goals
    assert [action.signature for action in first.plan] == [action.signature for action in second.plan]


def test_problem_observes_the_whole_plan_by_default():
    generated = generate_problem("ferry", random.Random(3), name="ferry-003")
    problem = generated.problem()
    assert problem.observations == generated.plan
    assert problem.name == "ferry-003"
    assert generated.problem(generated.plan[:1]).observations == generated.plan[:1]


def test_random_walk_stays_in_reachable_states(words, words_task):
    instance, _ = words
    state = random_walk(words_task, instance.initial, random.Random(1), 10)
    assert sum(1 for fact in state if fact.predicate == "handempty" or fact.predicate == "holding") == 1


def test_unknown_domain():
    with pytest.raises(exceptions.Impossible):
        generate_problem("sokoban", random.Random(0))
