"""Встроенные домены и задача-пример с тремя словами из кубиков."""
from __future__ import annotations

from typing import Dict, List, Tuple
import functools

from facts import Goal, goal_of
from pddl_parser import parse_domain, parse_fact_list, parse_problem
from planning_task import PlanningDomain, PlanningInstance

blocks = """
(define (domain blocks)
  (:requirements :strips)
  (:predicates (on ?x ?y) (ontable ?x) (clear ?x) (handempty) (holding ?x))
  (:action pickup
    :parameters (?x)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x) (not (ontable ?x)) (not (clear ?x)) (not (handempty))))
  (:action putdown
    :parameters (?x)
    :precondition (and (holding ?x))
    :effect (and (clear ?x) (handempty) (ontable ?x) (not (holding ?x))))
  (:action stack
    :parameters (?x ?y)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (clear ?x) (handempty) (on ?x ?y) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x ?y)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)) (not (handempty))))
)
"""

ferry = """
(define (domain ferry)
  (:requirements :strips :typing)
  (:types car location)
  (:predicates (at-ferry ?l - location) (at ?c - car ?l - location) (empty-ferry) (on ?c - car))
  (:action sail
    :parameters (?from ?to - location)
    :precondition (and (at-ferry ?from))
    :effect (and (at-ferry ?to) (not (at-ferry ?from))))
  (:action board
    :parameters (?car - car ?loc - location)
    :precondition (and (at ?car ?loc) (at-ferry ?loc) (empty-ferry))
    :effect (and (on ?car) (not (at ?car ?loc)) (not (empty-ferry))))
  (:action debark
    :parameters (?car - car ?loc - location)
    :precondition (and (on ?car) (at-ferry ?loc))
    :effect (and (at ?car ?loc) (empty-ferry) (not (on ?car))))
)
"""

grid = """
(define (domain grid)
  (:requirements :strips :typing)
  (:types place key shape)
  (:predicates
    (conn ?x ?y - place) (key-shape ?k - key ?s - shape) (lock-shape ?x - place ?s - shape)
    (at ?k - key ?x - place) (at-robot ?x - place) (locked ?x - place)
    (holding ?k - key) (open ?x - place) (arm-empty))
  (:action unlock
    :parameters (?curpos ?lockpos - place ?key - key ?shape - shape)
    :precondition (and (conn ?curpos ?lockpos) (key-shape ?key ?shape) (lock-shape ?lockpos ?shape)
                       (at-robot ?curpos) (locked ?lockpos) (holding ?key))
    :effect (and (open ?lockpos) (not (locked ?lockpos))))
  (:action move
    :parameters (?curpos ?nextpos - place)
    :precondition (and (at-robot ?curpos) (conn ?curpos ?nextpos) (open ?nextpos))
    :effect (and (at-robot ?nextpos) (not (at-robot ?curpos))))
  (:action pickup
    :parameters (?curpos - place ?key - key)
    :precondition (and (at-robot ?curpos) (at ?key ?curpos) (arm-empty))
    :effect (and (holding ?key) (not (at ?key ?curpos)) (not (arm-empty))))
  (:action putdown
    :parameters (?curpos - place ?key - key)
    :precondition (and (at-robot ?curpos) (holding ?key))
    :effect (and (arm-empty) (at ?key ?curpos) (not (holding ?key))))
)
"""

logistics = """
(define (domain logistics)
  (:requirements :strips :typing)
  (:types truck airplane - vehicle
          package vehicle - physobj
          airport location - place
          city place physobj - object)
  (:predicates (in-city ?loc - place ?city - city) (at ?obj - physobj ?loc - place) (in ?pkg - package ?veh - vehicle))
  (:action load-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (at ?pkg ?loc))
    :effect (and (in ?pkg ?truck) (not (at ?pkg ?loc))))
  (:action load-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (at ?pkg ?loc) (at ?airplane ?loc))
    :effect (and (in ?pkg ?airplane) (not (at ?pkg ?loc))))
  (:action unload-truck
    :parameters (?pkg - package ?truck - truck ?loc - place)
    :precondition (and (at ?truck ?loc) (in ?pkg ?truck))
    :effect (and (at ?pkg ?loc) (not (in ?pkg ?truck))))
  (:action unload-airplane
    :parameters (?pkg - package ?airplane - airplane ?loc - place)
    :precondition (and (in ?pkg ?airplane) (at ?airplane ?loc))
    :effect (and (at ?pkg ?loc) (not (in ?pkg ?airplane))))
  (:action drive-truck
    :parameters (?truck - truck ?loc-from ?loc-to - place ?city - city)
    :precondition (and (at ?truck ?loc-from) (in-city ?loc-from ?city) (in-city ?loc-to ?city))
    :effect (and (at ?truck ?loc-to) (not (at ?truck ?loc-from))))
  (:action fly-airplane
    :parameters (?airplane - airplane ?loc-from ?loc-to - airport)
    :precondition (and (at ?airplane ?loc-from))
    :effect (and (at ?airplane ?loc-to) (not (at ?airplane ?loc-from))))
)
"""

DOMAINS: Dict[str, str] = {
    "blocks": blocks,
    "ferry": ferry,
    "grid": grid,
    "logistics": logistics,
}


@functools.lru_cache(maxsize=None)
def load_domain(name: str) -> PlanningDomain:
    """Разобранный встроенный домен. KeyError для неизвестного имени."""
    return parse_domain(DOMAINS[name])


# Башня d на b, e на a; r и s на столе. Слова собираются сверху вниз.
words_problem = """
(define (problem words)
  (:domain blocks)
  (:objects a b d e r s)
  (:init (on d b) (on e a) (ontable b) (ontable a) (ontable r) (ontable s)
         (clear d) (clear e) (clear r) (clear s) (handempty))
  (:goal (and (clear r) (on r e) (on e d) (ontable d)))
)
"""

word_goals: Dict[str, str] = {
    "RED": "(clear r),(on r e),(on e d),(ontable d)",
    "BED": "(clear b),(on b e),(on e d),(ontable d)",
    "SAD": "(clear s),(on s a),(on a d),(ontable d)",
}

word_plan: List[str] = [
    "(unstack d b)",
    "(putdown d)",
    "(unstack e a)",
    "(stack e d)",
    "(pickup r)",
    "(stack r e)",
]

word_observations: List[str] = ["(unstack e a)", "(stack e d)"]


def words_example() -> Tuple[PlanningInstance, Dict[str, Goal]]:
    """Задача со словами RED, BED и SAD; настоящая цель: RED."""
    instance = parse_problem(words_problem, load_domain("blocks"))
    goals = {word: goal_of(parse_fact_list(text)) for word, text in word_goals.items()}
    return instance, goals
