import pytest

from actions import Atom, Operator, applicable, apply, instantiate, is_valid_plan, replay
from facts import FactTable, GroundFact, State, format_goal, goal_of
import exceptions

from helpers import fact, facts


def test_ground_fact_text_and_constructor():
    assert str(GroundFact.of("On", "A", "B")) == "(on a b)"
    assert str(GroundFact("handempty")) == "(handempty)"


def test_format_goal_sorts_facts():
    assert format_goal(facts("(on b c) (clear a)")) == "(clear a) (on b c)"


def test_state_is_a_closed_world_set():
    state = State(facts("(clear a) (handempty)"))
    assert fact("(clear a)") in state
    assert not state.holds(fact("(clear b)"))
    assert state.satisfies(facts("(clear a)"))
    assert state == State(reversed(list(state)))
    assert len(state) == 2


def test_fact_table_interns_in_first_seen_order():
    table = FactTable()
    assert table.intern(fact("(b)")) == 0
    assert table.intern(fact("(a)")) == 1
    assert table.intern(fact("(b)")) == 0
    assert table[1] == fact("(a)")
    assert table.ids([fact("(a)"), fact("(b)"), fact("(c)")]) == [0, 1]
    assert table.get(fact("(c)")) == -1
    with pytest.raises(KeyError):
        table.index(fact("(c)"))


def _stack():
    return Operator(
        "stack",
        [("?x", "object"), ("?y", "object")],
        pre=[Atom("holding", ("?x",)), Atom("clear", ("?y",))],
        add=[Atom("on", ("?x", "?y")), Atom("clear", ("?x",)), Atom("handempty")],
        delete=[Atom("holding", ("?x",)), Atom("clear", ("?y",))],
    )


def test_instantiate_binds_parameters():
    action = instantiate(_stack(), ("a", "b"))
    assert action.signature == "(stack a b)"
    assert action.pre == facts("(holding a) (clear b)")
    assert action.add == facts("(on a b) (clear a) (handempty)")
    assert action.delete == facts("(holding a) (clear b)")


def test_add_wins_over_delete():
    operator = Operator("touch", [("?x", "object")], add=[Atom("seen", ("?x",))], delete=[Atom("seen", ("?x",))])
    action = instantiate(operator, ("a",))
    assert action.add == facts("(seen a)")
    assert not action.delete


def test_undeclared_variable_is_rejected():
    with pytest.raises(exceptions.PDDLSemanticError):
        Operator("bad", [("?x", "object")], pre=[Atom("clear", ("?y",))])


def test_perform_deletes_then_adds():
    action = instantiate(_stack(), ("a", "b"))
    state = State(facts("(holding a) (clear b) (ontable b)"))
    assert action.perform(state) == State(facts("(on a b) (clear a) (handempty) (ontable b)"))


def test_perform_on_inapplicable_action_raises():
    action = instantiate(_stack(), ("a", "b"))
    with pytest.raises(exceptions.PreconditionViolation, match="clear b"):
        action.perform(State(facts("(holding a)")))


def test_replay_and_plan_validity():
    stack = instantiate(_stack(), ("a", "b"))
    initial = State(facts("(holding a) (clear b)"))
    assert replay(initial, [stack]).satisfies(facts("(on a b)"))
    assert is_valid_plan(initial, [stack], goal_of(facts("(on a b)")))
    assert not is_valid_plan(initial, [stack, stack], facts("(on a b)"))
    assert not is_valid_plan(initial, [], facts("(on a b)"))


def test_applicable_and_apply():
    action = instantiate(_stack(), ("a", "b"))
    state = State(facts("(holding a) (clear b)"))
    assert applicable(state, action)
    assert not applicable(State(facts("(holding a)")), action)
    after = apply(state, action)
    assert after == State(facts("(on a b) (clear a) (handempty)"))
    assert state == State(facts("(holding a) (clear b)"))
