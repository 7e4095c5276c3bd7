import json

import pytest

from facts import State
from grounding import build_task
from landmark_kind import LandmarkKind
from landmarks import Landmark, LandmarkGraph, extract_for_goals, extract_landmarks, verify_candidate
from pddl_parser import parse_domain, parse_problem
import exceptions

from helpers import fact, facts

ROADS_DOMAIN = """
(define (domain roads)
  (:requirements :strips :typing)
  (:types vehicle package city)
  (:predicates (road ?a ?b - city) (at ?o - object ?c - city) (in ?p - package ?v - vehicle))
  (:action drive
    :parameters (?v - vehicle ?from ?to - city)
    :precondition (and (at ?v ?from) (road ?from ?to))
    :effect (and (at ?v ?to) (not (at ?v ?from))))
  (:action load
    :parameters (?p - package ?v - vehicle ?c - city)
    :precondition (and (at ?p ?c) (at ?v ?c))
    :effect (and (in ?p ?v) (not (at ?p ?c))))
  (:action unload
    :parameters (?p - package ?v - vehicle ?c - city)
    :precondition (and (in ?p ?v) (at ?v ?c))
    :effect (and (at ?p ?c) (not (in ?p ?v)))))
"""

# Из a в b ведут две дороги: через c и через d.
ROADS_PROBLEM = """
(define (problem fetch)
  (:domain roads)
  (:objects truck - vehicle box - package a b c d - city)
  (:init (at truck a) (at box b)
         (road a c) (road c a) (road a d) (road d a) (road c b) (road b c) (road d b) (road b d))
  (:goal (and (at box a))))
"""


@pytest.fixture
def words_graphs(words, words_task):
    instance, goals = words
    return extract_for_goals(words_task, instance.initial, goals.values())


@pytest.fixture
def roads():
    domain = parse_domain(ROADS_DOMAIN)
    instance = parse_problem(ROADS_PROBLEM, domain)
    return instance, build_task(domain, instance)


def _keys(graph):
    return {landmark.key for landmark in graph}


def test_words_landmark_counts(words, words_graphs):
    _, goals = words
    assert [len(words_graphs[goals[word]]) for word in ("RED", "BED", "SAD")] == [10, 10, 11]


@pytest.mark.parametrize("word", ["RED", "BED", "SAD"])
def test_words_landmarks_match_the_hand_built_sets(words, words_graphs, golden_graphs, word):
    _, goals = words
    assert _keys(words_graphs[goals[word]]) == _keys(golden_graphs[goals[word]])


def test_words_graphs_are_well_formed(words_graphs):
    for graph in words_graphs.values():
        assert graph.solvable
        assert graph.is_acyclic()
        for subgoal, goal_fact in enumerate(graph.goal_facts):
            index = graph.index_of((LandmarkKind.CONJUNCTIVE, frozenset([goal_fact])))
            assert index is not None
            assert subgoal in graph[index].supports
            assert graph.subgoal_landmarks(subgoal)


def test_shared_landmark_supports_two_subgoals(words, words_graphs):
    _, goals = words
    graph = words_graphs[goals["BED"]]
    index = graph.index_of((LandmarkKind.CONJUNCTIVE, facts("(on d b) (clear d) (handempty)")))
    supported = {graph.goal_facts[subgoal] for subgoal in graph[index].supports}
    assert supported == facts("(clear b) (ontable d)")


def test_orderings_lead_to_the_goal(words, words_graphs):
    _, goals = words
    graph = words_graphs[goals["RED"]]
    stack = graph.index_of((LandmarkKind.CONJUNCTIVE, facts("(holding e) (clear d)")))
    target = graph.index_of((LandmarkKind.CONJUNCTIVE, facts("(on e d)")))
    assert (stack, target) in graph.edges
    assert stack in graph.ancestors([target])


def test_disjunctive_landmark_over_two_roads(roads):
    instance, task = roads
    graph = extract_landmarks(task, instance.initial, instance.goal)
    keys = _keys(graph)
    assert (LandmarkKind.CONJUNCTIVE, facts("(at box a)")) in keys
    assert (LandmarkKind.CONJUNCTIVE, facts("(in box truck) (at truck a)")) in keys
    assert (LandmarkKind.CONJUNCTIVE, facts("(at truck b) (at box b)")) in keys
    assert (LandmarkKind.DISJUNCTIVE, facts("(at truck c) (at truck d)")) in keys
    # Группа дорог истинна уже в начальном состоянии.
    assert (LandmarkKind.DISJUNCTIVE, facts("(road c b) (road d b)")) not in keys
    assert graph.subgoal_landmarks(0, include_disjunctive=True) != graph.subgoal_landmarks(0)


def test_disjunction_size_limit(roads):
    instance, task = roads
    graph = extract_landmarks(task, instance.initial, instance.goal, max_disjunction_size=1)
    assert all(landmark.is_conjunctive for landmark in graph)


def test_verify_candidate(words, words_task):
    instance, goals = words
    landmark = Landmark(LandmarkKind.CONJUNCTIVE, facts("(holding e)"))
    stray = Landmark(LandmarkKind.CONJUNCTIVE, facts("(holding s)"))
    assert verify_candidate(landmark, words_task, instance.initial, goals["RED"])
    assert not verify_candidate(stray, words_task, instance.initial, goals["RED"])
    assert verify_candidate(Landmark(LandmarkKind.CONJUNCTIVE, facts("(on r e)")), [], State(), goals["RED"])


def test_landmark_text():
    assert str(Landmark(LandmarkKind.CONJUNCTIVE, facts("(on e d)"))) == "(on e d)"
    assert str(Landmark(LandmarkKind.CONJUNCTIVE, facts("(clear d) (holding e)"))) == "(and (clear d) (holding e))"
    assert str(Landmark(LandmarkKind.DISJUNCTIVE, facts("(at t d) (at t c)"))) == "(or (at t c) (at t d))"
    with pytest.raises(ValueError):
        Landmark(LandmarkKind.CONJUNCTIVE, [])


def test_holds_in_depends_on_kind():
    state = facts("(at t c)")
    assert Landmark(LandmarkKind.DISJUNCTIVE, facts("(at t c) (at t d)")).holds_in(state)
    assert not Landmark(LandmarkKind.CONJUNCTIVE, facts("(at t c) (at t d)")).holds_in(state)


def test_unreachable_goal(words, words_task):
    instance, goals = words
    unreachable = facts("(on x y)")
    with pytest.raises(exceptions.UnsolvableGoalError):
        extract_landmarks(words_task, instance.initial, unreachable)
    graphs = extract_for_goals(words_task, instance.initial, [goals["RED"], unreachable])
    assert not graphs[unreachable].solvable
    assert len(graphs[unreachable]) == 0
    assert "Unsolvable" in graphs[unreachable].to_listing()


def test_listing_and_json(words, words_graphs):
    _, goals = words
    graph = words_graphs[goals["RED"]]
    listing = graph.to_listing().splitlines()
    assert listing[0] == "Goal: (clear r) (on e d) (on r e) (ontable d)"
    assert "(and (clear d) (holding e))" in listing
    assert "Orderings:" in listing
    document = json.loads(graph.to_json())
    assert document["goal"] == [str(goal_fact) for goal_fact in graph.goal_facts]
    assert len(document["landmarks"]) == len(graph)
    assert {node["kind"] for node in document["landmarks"]} == {"conjunctive"}
    assert len(document["edges"]) == len(graph.edges)


def test_cycle_detection():
    graph = LandmarkGraph(
        facts("(p)"),
        [Landmark(LandmarkKind.CONJUNCTIVE, facts("(p)"), [0]), Landmark(LandmarkKind.CONJUNCTIVE, facts("(q)"))],
        [(0, 1), (1, 0)],
    )
    assert not graph.is_acyclic()
    assert graph.ancestors([0]) == {0, 1}
    assert graph.index_of((LandmarkKind.CONJUNCTIVE, frozenset([fact("(q)")]))) == 1
