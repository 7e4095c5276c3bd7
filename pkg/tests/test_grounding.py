import pytest

from domain_factories import load_domain
from facts import State
from grounding import build_task, ground
from planning_task import PlanningInstance

from helpers import facts


def _blocks(count):
    return {f"b{number}": "object" for number in range(count)}


def test_two_blocks_ground_to_eight_actions(blocks_domain):
    actions = ground(blocks_domain, {"a": "object", "b": "object"})
    assert len(actions) == 8
    assert "(stack a a)" not in {action.signature for action in actions}


def test_repeated_objects_on_request(blocks_domain):
    actions = ground(blocks_domain, {"a": "object", "b": "object"}, allow_repeated_objects=True)
    assert len(actions) == 12


@pytest.mark.parametrize("count, expected", [(6, 72), (40, 3200)])
def test_action_counts_grow_quadratically(blocks_domain, count, expected):
    assert len(ground(blocks_domain, _blocks(count))) == expected


def test_actions_are_sorted_and_numbered(blocks_domain):
    actions = ground(blocks_domain, _blocks(3))
    assert [action.id for action in actions] == list(range(len(actions)))
    assert actions == sorted(actions)


def test_types_restrict_bindings():
    logistics = load_domain("logistics")
    objects = {"p1": "package", "t1": "truck", "a1": "airplane", "l1": "location", "ap1": "airport", "c1": "city"}
    signatures = {action.signature for action in ground(logistics, objects)}
    assert "(load-truck p1 t1 ap1)" in signatures
    assert "(load-truck p1 a1 l1)" not in signatures
    assert "(fly-airplane a1 ap1 l1)" not in signatures
    assert all(not signature.startswith("(drive-truck t1 l1 l1") for signature in signatures)


def test_build_task_interns_goal_facts(blocks_domain):
    instance = PlanningInstance("t", blocks_domain, {"a": "object"}, State(facts("(ontable a) (clear a) (handempty)")))
    task = build_task(blocks_domain, instance, [facts("(on a a)")])
    assert len(task) == 2
    assert facts("(on a a)") <= set(task.facts.facts)
    assert task.achievers(next(iter(facts("(on a a)")))) == []


def test_action_lookup_ignores_case_and_spacing(words_task):
    action = words_task.action_by_signature("  ( Stack  E D ) ")
    assert action is not None and action.signature == "(stack e d)"
    assert words_task.action_by_signature("(stack e z)") is None


def test_achievers(words_task):
    (on_e_d,) = facts("(on e d)")
    assert [words_task[a].signature for a in words_task.achievers(on_e_d)] == ["(stack e d)"]
