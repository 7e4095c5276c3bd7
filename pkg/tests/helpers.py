from __future__ import annotations

from typing import List, Tuple

from facts import Goal, GroundFact
from landmark_kind import LandmarkKind
from landmarks import Landmark, LandmarkGraph
from pddl_parser import parse_fact_list


def facts(text: str) -> frozenset:
    return frozenset(parse_fact_list(text))


def fact(text: str) -> GroundFact:
    (single,) = parse_fact_list(text)
    return single


def landmark_graph(goal: Goal, nodes: List[Tuple[str, List[str]]], edges: List[Tuple[str, str]]) -> LandmarkGraph:
    """Граф из списка (факты, подцели, которые он поддерживает) и рёбер по тексту фактов."""
    goal_facts = sorted(goal)
    landmarks = []
    index = {}
    for text, supported in nodes:
        supports = [goal_facts.index(fact(item)) for item in supported]
        landmarks.append(Landmark(LandmarkKind.CONJUNCTIVE, facts(text), supports))
        index[text] = len(landmarks) - 1
    return LandmarkGraph(goal, landmarks, [(index[before], index[after]) for before, after in edges])


# Отметка ставится один раз и больше не снимается.
MARKS = """
(define (domain marks)
  (:requirements :strips)
  (:predicates (fresh ?x) (marked ?x))
  (:action mark
    :parameters (?x)
    :precondition (and (fresh ?x))
    :effect (and (marked ?x) (not (fresh ?x)))))
"""
