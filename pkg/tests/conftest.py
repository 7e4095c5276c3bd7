from __future__ import annotations

from typing import Dict, Tuple

import pytest

from dataset import DatasetBundle, write_bundle
from domain_factories import load_domain, word_goals, word_observations, words_example
from facts import Goal
from grounding import build_task
from helpers import landmark_graph
from landmarks import LandmarkGraph
from pddl_parser import parse_problem
from planning_task import GroundedTask, PlanningInstance
from recognition import GoalRecognitionProblem


@pytest.fixture
def blocks_domain():
    return load_domain("blocks")


@pytest.fixture
def words() -> Tuple[PlanningInstance, Dict[str, Goal]]:
    return words_example()


@pytest.fixture
def words_task(words) -> GroundedTask:
    instance, goals = words
    return build_task(instance.domain, instance, list(goals.values()))


@pytest.fixture
def words_problem(words, words_task) -> GoalRecognitionProblem:
    instance, goals = words
    return GoalRecognitionProblem.from_signatures(
        words_task, instance.initial, [goals[word] for word in word_goals], word_observations
    )


OEA = "(on e a) (clear e) (handempty)"
ODB = "(on d b) (clear d) (handempty)"


@pytest.fixture
def golden_graphs(words) -> Dict[Goal, LandmarkGraph]:
    """Ориентиры трёх слов, заданные вручную вместе с разбиением по подцелям."""
    _, goals = words
    red = landmark_graph(
        goals["RED"],
        [
            ("(clear r)", ["(clear r)"]),
            ("(on r e)", ["(on r e)"]),
            ("(on e d)", ["(on e d)"]),
            ("(ontable d)", ["(ontable d)"]),
            ("(holding r) (clear e)", ["(on r e)"]),
            ("(clear r) (ontable r) (handempty)", ["(on r e)"]),
            ("(holding e) (clear d)", ["(on e d)"]),
            (OEA, ["(on e d)"]),
            ("(holding d)", ["(ontable d)"]),
            (ODB, ["(ontable d)"]),
        ],
        [
            ("(clear r) (ontable r) (handempty)", "(holding r) (clear e)"),
            ("(holding r) (clear e)", "(on r e)"),
            (OEA, "(holding e) (clear d)"),
            ("(holding e) (clear d)", "(on e d)"),
            (ODB, "(holding d)"),
            ("(holding d)", "(ontable d)"),
        ],
    )
    bed = landmark_graph(
        goals["BED"],
        [
            ("(clear b)", ["(clear b)"]),
            ("(on b e)", ["(on b e)"]),
            ("(on e d)", ["(on e d)"]),
            ("(ontable d)", ["(ontable d)"]),
            (ODB, ["(clear b)", "(ontable d)"]),
            ("(holding b) (clear e)", ["(on b e)"]),
            ("(clear b) (ontable b) (handempty)", ["(on b e)"]),
            ("(holding e) (clear d)", ["(on e d)"]),
            (OEA, ["(on e d)"]),
            ("(holding d)", ["(ontable d)"]),
        ],
        [
            (ODB, "(clear b)"),
            (ODB, "(holding d)"),
            ("(holding d)", "(ontable d)"),
            (OEA, "(holding e) (clear d)"),
            ("(holding e) (clear d)", "(on e d)"),
            ("(clear b) (ontable b) (handempty)", "(holding b) (clear e)"),
            ("(holding b) (clear e)", "(on b e)"),
            ("(clear b) (ontable b) (handempty)", "(holding e) (clear d)"),
        ],
    )
    sad = landmark_graph(
        goals["SAD"],
        [
            ("(clear s)", ["(clear s)"]),
            ("(on s a)", ["(on s a)"]),
            ("(on a d)", ["(on a d)"]),
            ("(ontable d)", ["(ontable d)"]),
            ("(holding s) (clear a)", ["(on s a)"]),
            ("(clear s) (ontable s) (handempty)", ["(on s a)"]),
            (OEA, ["(on s a)", "(on a d)"]),
            ("(holding a) (clear d)", ["(on a d)"]),
            ("(clear a) (ontable a) (handempty)", ["(on a d)"]),
            ("(holding d)", ["(ontable d)"]),
            (ODB, ["(ontable d)"]),
        ],
        [
            ("(clear s) (ontable s) (handempty)", "(holding s) (clear a)"),
            (OEA, "(holding s) (clear a)"),
            ("(holding s) (clear a)", "(on s a)"),
            ("(clear a) (ontable a) (handempty)", "(holding a) (clear d)"),
            ("(clear a) (ontable a) (handempty)", OEA),
            ("(holding a) (clear d)", "(on a d)"),
            (ODB, "(holding d)"),
            ("(holding d)", "(ontable d)"),
        ],
    )
    return {goals["RED"]: red, goals["BED"]: bed, goals["SAD"]: sad}


SMALL_GRID = """
(define (problem small-grid)
  (:domain grid)
  (:objects p1 p2 - place k1 - key s1 - shape)
  (:init (conn p1 p2) (conn p2 p1) (key-shape k1 s1) (lock-shape p2 s1)
         (at-robot p1) (open p1) (locked p2) (at k1 p1) (arm-empty))
  (:goal (and (at-robot p2))))
"""


@pytest.fixture
def small_grid() -> Tuple[PlanningInstance, GroundedTask]:
    """Две клетки, вторая заперта; ключ лежит рядом с роботом."""
    domain = load_domain("grid")
    instance = parse_problem(SMALL_GRID, domain)
    return instance, build_task(domain, instance)


@pytest.fixture
def words_bundle(tmp_path, words, words_task) -> DatasetBundle:
    """Набор со словами в каталоге <tmp>/blocks/100/000, настоящая цель: RED."""
    instance, goals = words
    observations = [words_task.action_by_signature(line) for line in word_observations]
    directory = tmp_path / "blocks" / "100" / "000"
    return write_bundle(directory, instance, [goals[word] for word in word_goals], observations, goals["RED"])
