import pytest

from domain_factories import DOMAINS, load_domain, words_problem
from pddl_parser import format_domain, format_problem, parse_domain, parse_fact_list, parse_problem
import exceptions

from helpers import fact, facts

TINY = """
(define (domain tiny)
  (:requirements :strips)
  (:predicates (p ?x) (q ?x))
  (:action go
    :parameters (?x)
    :precondition (and (p ?x))
    :effect (and (q ?x) (not (p ?x)))))
"""


def test_blocks_domain_shape(blocks_domain):
    assert blocks_domain.name == "blocks"
    assert [operator.name for operator in blocks_domain.operators] == ["pickup", "putdown", "stack", "unstack"]
    assert blocks_domain.predicates["on"] == ("object", "object")
    assert not blocks_domain.typed


def test_typed_hierarchy():
    logistics = load_domain("logistics")
    assert logistics.is_subtype("truck", "vehicle")
    assert logistics.is_subtype("truck", "physobj")
    assert logistics.is_subtype("airport", "object")
    assert not logistics.is_subtype("truck", "place")


def test_problem_is_lower_cased_and_parsed(blocks_domain):
    instance = parse_problem(words_problem.upper().replace("DEFINE", "define"), blocks_domain)
    assert fact("(on e a)") in instance.initial
    assert instance.goal == facts("(clear r) (on r e) (on e d) (ontable d)")
    assert set(instance.objects) == {"a", "b", "d", "e", "r", "s"}


@pytest.mark.parametrize("name", sorted(DOMAINS))
def test_domain_round_trip(name):
    domain = load_domain(name)
    assert parse_domain(format_domain(domain)) == domain


def test_problem_round_trip(blocks_domain):
    instance = parse_problem(words_problem, blocks_domain)
    assert parse_problem(format_problem(instance), blocks_domain) == instance


def test_template_goal_text_is_kept_verbatim(blocks_domain):
    instance = parse_problem(words_problem, blocks_domain)
    assert "(:goal (and <HYPOTHESIS>))" in format_problem(instance, goal_text="(and <HYPOTHESIS>)")


def test_syntax_error_has_location():
    with pytest.raises(exceptions.PDDLSyntaxError) as info:
        parse_domain("(define (domain broken)\n  (:predicates (p ?x))\n")
    assert info.value.line >= 1


@pytest.mark.parametrize(
    "fragment, feature",
    [
        ("(or (p ?x) (q ?x))", "disjunctive preconditions"),
        ("(not (p ?x))", "negative preconditions"),
        ("(forall (?y) (p ?y))", "universal quantification"),
    ],
)
def test_unsupported_preconditions(fragment, feature):
    text = TINY.replace(":precondition (and (p ?x))", f":precondition {fragment}")
    with pytest.raises(exceptions.UnsupportedFeatureError) as info:
        parse_domain(text)
    assert info.value.feature == feature


def test_unsupported_requirement():
    with pytest.raises(exceptions.UnsupportedFeatureError):
        parse_domain(TINY.replace(":strips", ":strips :conditional-effects"))


def test_conditional_effect_is_rejected():
    text = TINY.replace("(and (q ?x) (not (p ?x)))", "(when (p ?x) (q ?x))")
    with pytest.raises(exceptions.UnsupportedFeatureError, match="conditional effects"):
        parse_domain(text)


def test_undeclared_predicate():
    with pytest.raises(exceptions.PDDLSemanticError, match="Undeclared predicate r"):
        parse_domain(TINY.replace("(q ?x) (not", "(r ?x) (not"))


def test_arity_mismatch():
    with pytest.raises(exceptions.PDDLSemanticError, match="takes 1 arguments"):
        parse_domain(TINY.replace("(and (p ?x))", "(and (p ?x ?x))"))


def test_undeclared_object_in_problem():
    domain = parse_domain(TINY)
    problem = "(define (problem t) (:domain tiny) (:objects a) (:init (p a)) (:goal (q b)))"
    with pytest.raises(exceptions.PDDLSemanticError, match="Undeclared object b"):
        parse_problem(problem, domain)


def test_negative_initial_fact():
    domain = parse_domain(TINY)
    problem = "(define (problem t) (:domain tiny) (:objects a) (:init (not (p a))) (:goal (q a)))"
    with pytest.raises(exceptions.UnsupportedFeatureError):
        parse_problem(problem, domain)


def test_constants_join_the_universe():
    domain = parse_domain(TINY.replace("(:predicates", "(:constants home)\n  (:predicates"))
    problem = "(define (problem t) (:domain tiny) (:objects a) (:init (p home)) (:goal (q a)))"
    instance = parse_problem(problem, domain)
    assert instance.universe == {"home": "object", "a": "object"}


@pytest.mark.parametrize("text", ["(on a b),(clear c)", "(on a b) (clear c)", " (ON A B) ,  (clear c) "])
def test_fact_lists(text):
    assert parse_fact_list(text) == [fact("(on a b)"), fact("(clear c)")]


def test_fact_list_rejects_variables():
    with pytest.raises(exceptions.PDDLSyntaxError):
        parse_fact_list("(on ?x b)")


def test_empty_fact_list():
    assert parse_fact_list("   ") == []
