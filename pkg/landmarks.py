"""Извлечение упорядоченных фактовых ориентиров (landmarks).

Обратный проход от фактов цели по RPG: общие предусловия всех возможных
первых достигателей факта дают конъюнктивного кандидата, остальные
предусловия, сгруппированные по предикату, дают дизъюнктивных кандидатов.
Кандидат принимается, если без действий, добавляющих его факты, цель
недостижима даже в релаксированной задаче.
"""
from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple
import json
import logging

from actions import Action
from facts import Goal, GroundFact, State, format_goal, goal_of
from landmark_kind import LandmarkKind
from planning_task import GroundedTask, as_task
from rpg import build_rpg, relaxed_solvable
import exceptions

logger = logging.getLogger(__name__)

MAX_DISJUNCTION_SIZE = 4

LandmarkKey = Tuple[LandmarkKind, FrozenSet[GroundFact]]


class Landmark:
    """Фактовый ориентир.

`supports`: номера фактов цели (в порядке LandmarkGraph.goal_facts), из
обратных цепочек которых получен ориентир.
    """

    def __init__(self, kind: LandmarkKind, facts: Iterable[GroundFact], supports: Iterable[int] = ()):
        self.kind = kind
        self.facts: FrozenSet[GroundFact] = frozenset(facts)
        self.supports: Set[int] = set(supports)
        if not self.facts:
            raise ValueError("A landmark needs at least one fact.")

    @property
    def key(self) -> LandmarkKey:
        return self.kind, self.facts

    @property
    def is_conjunctive(self) -> bool:
        return self.kind is LandmarkKind.CONJUNCTIVE

    def holds_in(self, facts: FrozenSet[GroundFact]) -> bool:
        """Конъюнктивный: все факты в `facts`; дизъюнктивный: хотя бы один."""
        if self.is_conjunctive:
            return self.facts <= facts
        return not self.facts.isdisjoint(facts)

    def __str__(self) -> str:
        if self.is_conjunctive and len(self.facts) == 1:
            return format_goal(self.facts)
        return f"({self.kind.connective} {format_goal(self.facts)})"

    def __repr__(self) -> str:
        return f"Landmark({self}, supports={sorted(self.supports)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Landmark) and self.key == other.key and self.supports == other.supports

    def __hash__(self) -> int:
        return hash(self.key)


class ActionLandmark(NamedTuple):
    """Действие, входящее в каждый допустимый план. Только тип, извлечения нет."""

    action: Action


class LandmarkGraph:
    def __init__(
        self,
        goal: Iterable[GroundFact],
        landmarks: Sequence[Landmark] = (),
        edges: Iterable[Tuple[int, int]] = (),
        *,
        solvable: bool = True,
    ):
        self.goal: Goal = goal_of(goal)
        self.goal_facts: List[GroundFact] = sorted(self.goal)
        self.landmarks: List[Landmark] = list(landmarks)
        self.edges: List[Tuple[int, int]] = sorted(set(edges))
        self.solvable = solvable

        self._index: Dict[LandmarkKey, int] = {landmark.key: i for i, landmark in enumerate(self.landmarks)}
        self._predecessors: List[List[int]] = [[] for _ in self.landmarks]
        for before, after in self.edges:
            self._predecessors[after].append(before)

    @classmethod
    def unsolvable(cls, goal: Iterable[GroundFact]) -> LandmarkGraph:
        """Пустой граф-метка для цели, недостижимой даже без удалений."""
        return cls(goal, solvable=False)

    def __len__(self) -> int:
        return len(self.landmarks)

    def __iter__(self) -> Iterator[Landmark]:
        return iter(self.landmarks)

    def __getitem__(self, index: int) -> Landmark:
        return self.landmarks[index]

    def index_of(self, key: LandmarkKey) -> Optional[int]:
        return self._index.get(key)

    def predecessors(self, index: int) -> List[int]:
        return list(self._predecessors[index])

    def ancestors(self, indices: Iterable[int]) -> Set[int]:
        """Все транзитивные предшественники `indices` (сами они не включаются)."""
        found: Set[int] = set()
        stack = list(indices)
        while stack:
            for before in self._predecessors[stack.pop()]:
                if before not in found:
                    found.add(before)
                    stack.append(before)
        return found

    def subgoal_landmarks(self, subgoal: int, include_disjunctive: bool = False) -> List[int]:
        return [
            index
            for index, landmark in enumerate(self.landmarks)
            if subgoal in landmark.supports and (include_disjunctive or landmark.is_conjunctive)
        ]

    def initial_landmarks(self, initial: State) -> Set[int]:
        return {index for index, landmark in enumerate(self.landmarks) if landmark.holds_in(initial.facts)}

    def is_acyclic(self) -> bool:
        state = [0] * len(self.landmarks)

        def visit(index: int) -> bool:
            state[index] = 1
            for before in self._predecessors[index]:
                if state[before] == 1 or (state[before] == 0 and not visit(before)):
                    return False
            state[index] = 2
            return True

        return all(state[index] == 2 or visit(index) for index in range(len(self.landmarks)))

    def to_listing(self) -> str:
        """Текстовый список в виде строк (and ...) / (or ...) и упорядочений."""
        lines = [f"Goal: {format_goal(self.goal)}"]
        if not self.solvable:
            lines.append("Unsolvable in the delete relaxation.")
            return "\n".join(lines) + "\n"
        lines.append("Fact Landmarks:")
        lines.extend(str(landmark) for landmark in self.landmarks)
        if self.edges:
            lines.append("Orderings:")
            lines.extend(f"{self.landmarks[before]} -> {self.landmarks[after]}" for before, after in self.edges)
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "goal": [str(fact) for fact in self.goal_facts],
            "solvable": self.solvable,
            "landmarks": [
                {
                    "kind": landmark.kind.name.lower(),
                    "facts": [str(fact) for fact in sorted(landmark.facts)],
                    "supports": sorted(landmark.supports),
                }
                for landmark in self.landmarks
            ],
            "edges": [list(edge) for edge in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __repr__(self) -> str:
        return f"LandmarkGraph({format_goal(self.goal)}: {len(self.landmarks)} landmarks, {len(self.edges)} edges)"


def verify_candidate(
    candidate: Landmark,
    actions: Sequence[Action],
    initial: State,
    goal: Iterable[GroundFact],
) -> bool:
    """Проверка удалением: без действий, добавляющих факты кандидата, цель
недостижима в релаксированной задаче.

Факт цели всегда ориентир.
    """
    goal = goal_of(goal)
    if candidate.is_conjunctive and len(candidate.facts) == 1 and candidate.facts <= goal:
        return True
    task = as_task(actions, initial)
    excluded = task.achievers_of_any(candidate.facts)
    return not relaxed_solvable(task, initial, goal, excluded)


class _Extraction:
    """Состояние одного обратного прохода для одной цели."""

    def __init__(self, task: GroundedTask, initial: State, goal: Goal, max_disjunction_size: int):
        self.task = task
        self.initial = initial
        self.goal = goal
        self.max_disjunction_size = max_disjunction_size
        self.levels = build_rpg(task, initial)

        self.landmarks: List[Landmark] = []
        self.index: Dict[LandmarkKey, int] = {}
        self.edges: Set[Tuple[int, int]] = set()
        self._first_achievers: Dict[GroundFact, List[Action]] = {}
        self._verdicts: Dict[LandmarkKey, bool] = {}

    def add(self, kind: LandmarkKind, facts: FrozenSet[GroundFact], supports: Iterable[int] = ()) -> Tuple[int, bool]:
        key = (kind, facts)
        if key in self.index:
            index = self.index[key]
            self.landmarks[index].supports.update(supports)
            return index, False
        self.index[key] = len(self.landmarks)
        self.landmarks.append(Landmark(kind, facts, supports))
        return self.index[key], True

    def first_achievers(self, fact: GroundFact) -> List[Action]:
        """Достигатели `fact`, чьи предусловия достижимы без самого `fact`."""
        if fact not in self._first_achievers:
            achievers = self.task.achievers(fact)
            without = build_rpg(self.task, self.initial, excluded=achievers)
            self._first_achievers[fact] = [self.task[a] for a in achievers if without.action_reachable(a)]
        return self._first_achievers[fact]

    def accept(self, kind: LandmarkKind, facts: FrozenSet[GroundFact]) -> bool:
        key = (kind, facts)
        if key not in self._verdicts:
            initial = self.initial.facts
            if kind is LandmarkKind.CONJUNCTIVE and facts <= initial:
                verdict = True
            elif kind is LandmarkKind.DISJUNCTIVE and not facts.isdisjoint(initial):
                verdict = False
            else:
                verdict = verify_candidate(Landmark(kind, facts), self.task, self.initial, self.goal)
            self._verdicts[key] = verdict
        return self._verdicts[key]

    def disjunctive_candidates(
        self, preconditions: List[FrozenSet[GroundFact]], shared: FrozenSet[GroundFact]
    ) -> Iterator[FrozenSet[GroundFact]]:
        by_predicate: Dict[str, Set[GroundFact]] = {}
        for pre in preconditions:
            for fact in pre - shared:
                by_predicate.setdefault(fact.predicate, set()).add(fact)
        for predicate in sorted(by_predicate):
            facts = frozenset(by_predicate[predicate])
            if not 2 <= len(facts) <= self.max_disjunction_size:
                continue
            # Каждый первый достигатель обязан требовать хотя бы один факт группы.
            if all(not pre.isdisjoint(facts) for pre in preconditions):
                yield facts

    def expand(self, node: int) -> List[int]:
        created: List[int] = []
        for fact in sorted(self.landmarks[node].facts):
            if fact in self.initial.facts or self.levels.fact_level(fact) == 0:
                continue
            achievers = self.first_achievers(fact)
            if not achievers:
                continue
            preconditions = [action.pre for action in achievers]
            shared = frozenset.intersection(*preconditions)

            if shared and self.accept(LandmarkKind.CONJUNCTIVE, shared):
                index, new = self.add(LandmarkKind.CONJUNCTIVE, shared)
                if index != node:
                    self.edges.add((index, node))
                if new:
                    created.append(index)

            for facts in self.disjunctive_candidates(preconditions, shared):
                if self.accept(LandmarkKind.DISJUNCTIVE, facts):
                    index, _ = self.add(LandmarkKind.DISJUNCTIVE, facts)
                    self.edges.add((index, node))
        return created

    def propagate_supports(self) -> None:
        changed = True
        while changed:
            changed = False
            for before, after in sorted(self.edges):
                missing = self.landmarks[after].supports - self.landmarks[before].supports
                if missing:
                    self.landmarks[before].supports.update(missing)
                    changed = True

    def run(self) -> LandmarkGraph:
        goal_facts = sorted(self.goal)
        if not relaxed_solvable(self.task, self.initial, goal_facts):
            raise exceptions.UnsolvableGoalError(f"Goal {format_goal(self.goal)} is unreachable even without deletes.")

        queue = deque()
        for subgoal, fact in enumerate(goal_facts):
            index, _ = self.add(LandmarkKind.CONJUNCTIVE, frozenset([fact]), [subgoal])
            queue.append(index)
        while queue:
            queue.extend(self.expand(queue.popleft()))

        self.propagate_supports()
        return LandmarkGraph(self.goal, self.landmarks, self.edges)


def extract_landmarks(
    actions: Sequence[Action],
    initial: State,
    goal: Iterable[GroundFact],
    *,
    max_disjunction_size: int = MAX_DISJUNCTION_SIZE,
) -> LandmarkGraph:
    """Извлечь граф ориентиров цели.

Факты начального состояния принимаются как ориентиры без проверки удалением:
они истинны в первом состоянии любого плана.
    """
    task = as_task(actions, initial)
    graph = _Extraction(task, initial, goal_of(goal), max_disjunction_size).run()
    logger.debug("Extracted %r", graph)
    return graph


def extract_for_goals(
    actions: Sequence[Action],
    initial: State,
    goals: Iterable[Iterable[GroundFact]],
    *,
    max_disjunction_size: int = MAX_DISJUNCTION_SIZE,
) -> Dict[Goal, LandmarkGraph]:
    """Граф для каждой (неповторяющейся) цели. Недостижимые цели получают
LandmarkGraph.unsolvable.
    """
    task = as_task(actions, initial)
    graphs: Dict[Goal, LandmarkGraph] = {}
    for goal in goals:
        goal = goal_of(goal)
        if goal in graphs:
            continue
        try:
            graphs[goal] = extract_landmarks(task, initial, goal, max_disjunction_size=max_disjunction_size)
        except exceptions.UnsolvableGoalError as exc:
            logger.info("%s", exc)
            graphs[goal] = LandmarkGraph.unsolvable(goal)
    return graphs
