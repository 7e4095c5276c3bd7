from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple
import logging
import random

from actions import Action
from domain_factories import load_domain
from facts import Goal, GroundFact, State, goal_of
from grounding import build_task
from planner import find_plan
from planning_task import GroundedTask, PlanningDomain, PlanningInstance
from recognition import GoalRecognitionProblem, Observation
import exceptions

logger = logging.getLogger(__name__)

# Предикаты, из которых составляются цели-кандидаты.
goal_predicates: Dict[str, Tuple[str, ...]] = {
    "blocks": ("on", "ontable", "clear"),
    "ferry": ("at",),
    "grid": ("at", "at-robot"),
    "logistics": ("at",),
}

goal_sizes: Dict[str, Tuple[int, int]] = {
    "blocks": (2, 4),
    "ferry": (1, 3),
    "grid": (1, 2),
    "logistics": (1, 3),
}

max_walk_length = 14
max_attempts = 200


class GeneratedProblem:
    def __init__(
        self,
        domain_name: str,
        instance: PlanningInstance,
        task: GroundedTask,
        goals: Sequence[Goal],
        real_goal: Goal,
        plan: Sequence[Action],
    ):
        self.domain_name = domain_name
        self.instance = instance
        self.task = task
        self.goals: List[Goal] = list(goals)
        self.real_goal = real_goal
        self.plan: List[Action] = list(plan)

    @property
    def domain(self) -> PlanningDomain:
        return self.instance.domain

    def problem(self, observations: Optional[Sequence[Observation]] = None) -> GoalRecognitionProblem:
        """Задача распознавания; по умолчанию наблюдается весь план."""
        if observations is None:
            observations = self.plan
        return GoalRecognitionProblem(
            self.task, self.instance.initial, self.goals, observations, name=self.instance.name
        )

    def __repr__(self) -> str:
        return f"GeneratedProblem({self.instance.name}, {len(self.goals)} goals, plan of {len(self.plan)})"


def _fact(predicate: str, *args: str) -> GroundFact:
    return GroundFact(predicate, tuple(args))


def generate_blocks(rng: random.Random) -> Tuple[Dict[str, str], List[GroundFact]]:
    names = [f"b{index}" for index in range(1, rng.randint(4, 6) + 1)]
    shuffled = rng.sample(names, len(names))
    facts = [_fact("handempty")]
    tower: List[str] = []
    for name in shuffled:
        if tower and rng.random() < 0.5:
            facts.append(_fact("on", name, tower[-1]))
        else:
            if tower:
                facts.append(_fact("clear", tower[-1]))
            tower = []
            facts.append(_fact("ontable", name))
        tower.append(name)
    facts.append(_fact("clear", tower[-1]))
    return {name: "object" for name in names}, facts


def generate_ferry(rng: random.Random) -> Tuple[Dict[str, str], List[GroundFact]]:
    locations = [f"l{index}" for index in range(1, rng.randint(3, 4) + 1)]
    cars = [f"c{index}" for index in range(1, rng.randint(2, 3) + 1)]
    facts = [_fact("empty-ferry"), _fact("at-ferry", rng.choice(locations))]
    facts.extend(_fact("at", car, rng.choice(locations)) for car in cars)
    objects = {name: "location" for name in locations}
    objects.update({name: "car" for name in cars})
    return objects, facts


def generate_grid(rng: random.Random) -> Tuple[Dict[str, str], List[GroundFact]]:
    width, height = 3, 2
    places = [f"p{x}-{y}" for y in range(height) for x in range(width)]
    shapes = ["circle", "square"]
    keys = [f"k{index}" for index in range(1, len(shapes) + 1)]

    facts: List[GroundFact] = [_fact("arm-empty")]
    for y in range(height):
        for x in range(width):
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                if 0 <= x + dx < width and 0 <= y + dy < height:
                    facts.append(_fact("conn", f"p{x}-{y}", f"p{x + dx}-{y + dy}"))

    robot = rng.choice(places)
    locked = rng.sample([place for place in places if place != robot], rng.randint(1, 2))
    open_places = [place for place in places if place not in locked]
    facts.append(_fact("at-robot", robot))
    for place in open_places:
        facts.append(_fact("open", place))
    for place in locked:
        facts.append(_fact("locked", place))
        facts.append(_fact("lock-shape", place, rng.choice(shapes)))
    for key, shape in zip(keys, shapes):
        facts.append(_fact("key-shape", key, shape))
        facts.append(_fact("at", key, rng.choice(open_places)))

    objects = {name: "place" for name in places}
    objects.update({name: "key" for name in keys})
    objects.update({name: "shape" for name in shapes})
    return objects, facts


def generate_logistics(rng: random.Random) -> Tuple[Dict[str, str], List[GroundFact]]:
    cities = ["city1", "city2"]
    objects: Dict[str, str] = {"plane1": "airplane"}
    facts: List[GroundFact] = []
    places: List[str] = []
    for number, city in enumerate(cities, start=1):
        objects[city] = "city"
        location, airport, truck = f"loc{number}", f"apt{number}", f"truck{number}"
        objects.update({location: "location", airport: "airport", truck: "truck"})
        facts.extend([_fact("in-city", location, city), _fact("in-city", airport, city)])
        facts.append(_fact("at", truck, rng.choice([location, airport])))
        places.extend([location, airport])
    facts.append(_fact("at", "plane1", rng.choice(["apt1", "apt2"])))
    for number in range(1, rng.randint(2, 3) + 1):
        package = f"pkg{number}"
        objects[package] = "package"
        facts.append(_fact("at", package, rng.choice(places)))
    return objects, facts


generators: Dict[str, Callable[[random.Random], Tuple[Dict[str, str], List[GroundFact]]]] = {
    "blocks": generate_blocks,
    "ferry": generate_ferry,
    "grid": generate_grid,
    "logistics": generate_logistics,
}


def random_walk(task: GroundedTask, initial: State, rng: random.Random, length: int) -> State:
    """Случайное блуждание из `initial`: на каждом шаге: случайное применимое действие."""
    state = initial
    for _ in range(length):
        options = [action for action in task if action.is_applicable(state)]
        if not options:
            break
        state = rng.choice(options).perform(state)
    return state


def _goal_from(state: State, initial: State, predicates: Tuple[str, ...], size: int, rng: random.Random) -> Goal:
    pool = [fact for fact in state if fact.predicate in predicates]
    if not pool:
        return frozenset()
    return goal_of(rng.sample(pool, min(size, len(pool))))


def _compatible(goal: Goal, goals: List[Goal]) -> bool:
    """Цель не должна совпадать с другой или быть её подмножеством (и наоборот)."""
    return all(not (goal <= other or other <= goal) for other in goals)


def generate_problem(
    domain_name: str,
    rng: random.Random,
    *,
    min_goals: int = 3,
    max_goals: int = 6,
    name: Optional[str] = None,
) -> GeneratedProblem:
    """Случайная задача распознавания для встроенного домена.

Цели-кандидаты получаются случайными блужданиями из начального состояния и
попарно не вложены друг в друга. Настоящая цель выбирается среди них, план
к ней строит planner.find_plan.
    """
    if domain_name not in generators:
        raise exceptions.Impossible(f"No generator for domain {domain_name}.")
    domain = load_domain(domain_name)
    predicates = goal_predicates[domain_name]
    low, high = goal_sizes[domain_name]

    for attempt in range(max_attempts):
        objects, facts = generators[domain_name](rng)
        initial = State(facts)
        instance = PlanningInstance(name or f"{domain_name}-{attempt}", domain, objects, initial)
        task = build_task(domain, instance)

        wanted = rng.randint(min_goals, max_goals)
        goals: List[Goal] = []
        seen: Set[Goal] = set()
        for _ in range(wanted * 10):
            if len(goals) == wanted:
                break
            state = random_walk(task, initial, rng, rng.randint(2, max_walk_length))
            goal = _goal_from(state, initial, predicates, rng.randint(low, high), rng)
            if not goal or goal <= initial.facts or goal in seen:
                continue
            seen.add(goal)
            if _compatible(goal, goals):
                goals.append(goal)
        if len(goals) < min_goals:
            continue

        real_goal = rng.choice(goals)
        try:
            plan = find_plan(task, initial, real_goal)
        except exceptions.SearchExhausted as exc:
            logger.debug("Discarding generated instance: %s", exc)
            continue
        if not plan:
            continue
        return GeneratedProblem(domain_name, instance.with_goal(real_goal), task, goals, real_goal, plan)

    raise exceptions.Impossible(f"Could not generate a {domain_name} problem in {max_attempts} attempts.")
