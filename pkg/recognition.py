"""Распознавание целей по ориентирам.

Задача распознавания включает заземлённый домен, начальное состояние, список
целей-кандидатов и последовательность наблюдений. Наблюдение есть действие
(сравниваются его pre ∪ add) или множество фактов (сравнивается напрямую).
"""
from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Set, Union
import json
import logging

from actions import Action
from facts import Goal, GroundFact, State, format_goal, goal_of
from landmarks import Landmark, LandmarkGraph, LandmarkKey
from partitions import FactPartitions
from planning_task import GroundedTask
from pddl_parser import parse_fact_list
import exceptions

logger = logging.getLogger(__name__)

Observation = Union[Action, FrozenSet[GroundFact]]

# Допуск при сравнении оценки с порогом max − θ.
TOLERANCE = 1e-9


def observation_facts(observation: Observation) -> FrozenSet[GroundFact]:
    if isinstance(observation, Action):
        return observation.pre | observation.add
    return frozenset(observation)


def format_observation(observation: Observation) -> str:
    if isinstance(observation, Action):
        return observation.signature
    return format_goal(observation)


class GoalRecognitionProblem:
    """Задача распознавания ⟨домен, I, цели-кандидаты, наблюдения⟩.

Повторяющиеся цели схлопываются с сохранением порядка. Наблюдения, которые
не удалось сопоставить с действиями домена, не выбрасываются молча, а
складываются в `unresolved`.
    """

    def __init__(
        self,
        task: GroundedTask,
        initial: State,
        candidate_goals: Iterable[Iterable[GroundFact]],
        observations: Iterable[Observation] = (),
        *,
        unresolved: Iterable[str] = (),
        name: str = "",
    ):
        self.task = task
        self.initial = initial
        self.name = name
        self.candidate_goals: List[Goal] = []
        for goal in candidate_goals:
            goal = goal_of(goal)
            if goal not in self.candidate_goals:
                self.candidate_goals.append(goal)
        if not self.candidate_goals:
            raise exceptions.Impossible("A recognition problem needs at least one candidate goal.")
        self.observations: List[Observation] = list(observations)
        self.unresolved: List[str] = list(unresolved)

    @classmethod
    def from_signatures(
        cls,
        task: GroundedTask,
        initial: State,
        candidate_goals: Iterable[Iterable[GroundFact]],
        lines: Iterable[str],
        *,
        facts_observations: bool = False,
        name: str = "",
    ) -> GoalRecognitionProblem:
        """Построить задачу из текстовых наблюдений.

Пустые строки и комментарии `;` пропускаются. В режиме `facts_observations`
каждая строка: список фактов.
        """
        observations: List[Observation] = []
        unresolved: List[str] = []
        for line in lines:
            text = line.split(";", 1)[0].strip()
            if not text:
                continue
            if facts_observations:
                observations.append(frozenset(parse_fact_list(text)))
                continue
            action = task.action_by_signature(text)
            if action is None:
                logger.warning("Observation %s does not match any grounded action", text)
                unresolved.append(text)
            else:
                observations.append(action)
        return cls(task, initial, candidate_goals, observations, unresolved=unresolved, name=name)

    def with_observations(self, observations: Iterable[Observation]) -> GoalRecognitionProblem:
        return GoalRecognitionProblem(
            self.task,
            self.initial,
            self.candidate_goals,
            observations,
            unresolved=self.unresolved,
            name=self.name,
        )

    def __repr__(self) -> str:
        return (
            f"GoalRecognitionProblem({self.name or '?'}: {len(self.candidate_goals)} goals, "
            f"{len(self.observations)} observations)"
        )


class AchievedLandmarks:
    """Для каждой цели: номера достигнутых ориентиров её графа."""

    def __init__(self, achieved: Optional[Mapping[Goal, Set[int]]] = None):
        self._achieved: Dict[Goal, Set[int]] = {goal: set(found) for goal, found in (achieved or {}).items()}

    def __getitem__(self, goal: Goal) -> Set[int]:
        return self._achieved[goal_of(goal)]

    def __contains__(self, goal: object) -> bool:
        return goal in self._achieved

    def __iter__(self) -> Iterator[Goal]:
        return iter(self._achieved)

    def __len__(self) -> int:
        return len(self._achieved)

    def count(self, goal: Goal) -> int:
        return len(self[goal])

    def landmarks(self, goal: Goal, graph: LandmarkGraph) -> List[Landmark]:
        return [graph[index] for index in sorted(self[goal])]


def achieved_in_graph(
    initial: State,
    observations: Sequence[Observation],
    graph: LandmarkGraph,
    *,
    unmark_deleted: bool = False,
) -> Set[int]:
    """Достигнутые ориентиры одного графа.

Сначала: истинные в I. Затем каждое наблюдение отмечает ориентиры,
выполненные в его фактах, вместе со всеми их предшественниками. Без
`unmark_deleted` множество только растёт. С ним перед отметкой снимаются
ориентиры, все факты которых наблюдаемое действие удаляет.
    """
    achieved = graph.initial_landmarks(initial)
    for observation in observations:
        if unmark_deleted and isinstance(observation, Action):
            achieved -= {index for index in achieved if graph[index].facts <= observation.delete}
        facts = observation_facts(observation)
        matched = {index for index, landmark in enumerate(graph) if landmark.holds_in(facts)}
        if matched:
            achieved |= matched
            achieved |= graph.ancestors(matched)
    return achieved


def compute_achieved_landmarks(
    initial: State,
    goals: Iterable[Iterable[GroundFact]],
    observations: Sequence[Observation],
    landmark_graphs: Mapping[Goal, LandmarkGraph],
    *,
    unmark_deleted: bool = False,
) -> AchievedLandmarks:
    achieved: Dict[Goal, Set[int]] = {}
    for goal in goals:
        goal = goal_of(goal)
        achieved[goal] = achieved_in_graph(
            initial, observations, landmark_graphs[goal], unmark_deleted=unmark_deleted
        )
    return AchievedLandmarks(achieved)


def landmark_ratio(achieved: Set[int], graph: LandmarkGraph) -> float:
    """Доля достигнутых узлов графа, каждый ориентир считается единицей."""
    if not graph.solvable:
        return 0.0
    if not len(graph):
        return 1.0
    return len(achieved) / len(graph)


def h_gc(
    goal: Iterable[GroundFact],
    achieved: Set[int],
    graph: LandmarkGraph,
    *,
    include_disjunctive: bool = False,
) -> float:
    """Оценка завершённости цели: среднее по подцелям долей достигнутых
ориентиров подцели.
    """
    assert goal_of(goal) == graph.goal, "landmark graph belongs to another goal"
    if not graph.solvable:
        return 0.0
    if not graph.goal_facts:
        return 1.0
    total = 0.0
    for subgoal in range(len(graph.goal_facts)):
        landmarks = graph.subgoal_landmarks(subgoal, include_disjunctive)
        assert landmarks, f"sub-goal {graph.goal_facts[subgoal]} has no landmarks"
        total += sum(1 for index in landmarks if index in achieved) / len(landmarks)
    return total / len(graph.goal_facts)


class UniquenessTable:
    """Уникальность ориентира: 1 / число целей, в графах которых он есть.

Ориентиры отождествляются по виду и множеству фактов.
    """

    def __init__(self, values: Optional[Mapping[LandmarkKey, float]] = None):
        self.values: Dict[LandmarkKey, float] = dict(values or {})

    @classmethod
    def build(cls, graphs: Iterable[LandmarkGraph]) -> UniquenessTable:
        counts: Dict[LandmarkKey, int] = {}
        for graph in graphs:
            for key in {landmark.key for landmark in graph}:
                counts[key] = counts.get(key, 0) + 1
        return cls({key: 1.0 / count for key, count in counts.items()})

    def __getitem__(self, landmark: Union[Landmark, LandmarkKey]) -> float:
        key = landmark.key if isinstance(landmark, Landmark) else landmark
        return self.values[key]

    def __contains__(self, landmark: object) -> bool:
        key = landmark.key if isinstance(landmark, Landmark) else landmark
        return key in self.values

    def __len__(self) -> int:
        return len(self.values)

    def total(self, graph: LandmarkGraph, *, include_disjunctive: bool = False) -> float:
        return sum(self[landmark] for landmark in graph if include_disjunctive or landmark.is_conjunctive)


def landmark_uniqueness(landmark: Landmark, all_graphs: Iterable[LandmarkGraph]) -> float:
    count = sum(1 for graph in all_graphs if graph.index_of(landmark.key) is not None)
    if not count:
        raise KeyError(f"{landmark} occurs in no landmark graph")
    return 1.0 / count


def h_uniq(
    goal: Iterable[GroundFact],
    achieved: Set[int],
    graph: LandmarkGraph,
    uniqueness_table: UniquenessTable,
    *,
    include_disjunctive: bool = False,
) -> float:
    """Сумма уникальностей достигнутых ориентиров, делённая на сумму по всем
ориентирам цели.
    """
    assert goal_of(goal) == graph.goal, "landmark graph belongs to another goal"
    if not graph.solvable:
        return 0.0
    if not graph.goal_facts:
        return 1.0
    reached = 0.0
    total = 0.0
    # Обе суммы идут в одном порядке: когда достигнуто всё, оценка ровно 1.0.
    for index, landmark in enumerate(graph):
        if not (include_disjunctive or landmark.is_conjunctive):
            continue
        value = uniqueness_table[landmark]
        total += value
        if index in achieved:
            reached += value
    assert total > 0, "goal without landmarks"
    return reached / total


class ScoreOutcome(NamedTuple):
    scores: Dict[Goal, float]
    eliminated: Dict[Goal, str]
    returned: List[Goal]
    anomaly: bool


def _partition_violation(
    goal: Goal,
    graph: LandmarkGraph,
    achieved: Set[int],
    initial: State,
    observations: Sequence[Observation],
    partitions: FactPartitions,
    literal_partition_test: bool,
) -> Optional[str]:
    """Причина, по которой цель невозможна при этих наблюдениях, или None."""
    initial_facts = initial.facts
    sa = partitions.strictly_activating
    ua = partitions.unstable_activating
    st = partitions.strictly_terminal

    for landmark in graph:
        missing = {fact for fact in landmark.facts if fact in sa and fact not in initial_facts}
        if missing and (landmark.is_conjunctive or missing == landmark.facts):
            return f"needs strictly activating {format_goal(missing)} absent from the initial state"

    actions = [observation for observation in observations if isinstance(observation, Action)]
    if literal_partition_test:
        tested = ua | st
        for action in actions:
            if tested and tested <= action.pre | action.add | action.delete:
                return f"{action.signature} touches every unstable activating and strictly terminal fact"
        return None

    relevant: Set[GroundFact] = set(graph.goal)
    for landmark in graph:
        relevant |= landmark.facts
    pending: Set[GroundFact] = set()
    for index, landmark in enumerate(graph):
        if landmark.is_conjunctive and index not in achieved:
            pending |= landmark.facts

    for action in actions:
        for fact in sorted(action.delete & ua):
            if fact in graph.goal or fact in pending:
                return f"{action.signature} deletes unstable activating {fact} still needed"
        for fact in sorted(action.add & st):
            if fact not in relevant:
                return f"{action.signature} adds strictly terminal {fact} unrelated to the goal"
    return None


def evaluate_filter(
    problem: GoalRecognitionProblem,
    landmark_graphs: Mapping[Goal, LandmarkGraph],
    partitions: FactPartitions,
    theta: float = 0.0,
    *,
    literal_partition_test: bool = False,
) -> ScoreOutcome:
    """Полный проход фильтра: доли ориентиров, отсеянные цели и ответ.

Доли считаются по ориентирам, которые наблюдения не удалили обратно. Если
отсеяны все цели, ответ строится по долям без отсева и отмечается аномалия.
    """
    achieved = compute_achieved_landmarks(
        problem.initial, problem.candidate_goals, problem.observations, landmark_graphs, unmark_deleted=True
    )
    ratios: Dict[Goal, float] = {}
    eliminated: Dict[Goal, str] = {}
    for goal in problem.candidate_goals:
        graph = landmark_graphs[goal]
        ratios[goal] = landmark_ratio(achieved[goal], graph)
        if not graph.solvable:
            eliminated[goal] = "unsolvable in the delete relaxation"
            continue
        reason = _partition_violation(
            goal,
            graph,
            achieved[goal],
            problem.initial,
            problem.observations,
            partitions,
            literal_partition_test,
        )
        if reason is not None:
            eliminated[goal] = reason

    survivors = [goal for goal in problem.candidate_goals if goal not in eliminated]
    anomaly = False
    if not survivors:
        survivors = [goal for goal in problem.candidate_goals if landmark_graphs[goal].solvable]
        anomaly = bool(survivors)
        if anomaly:
            logger.warning("Every candidate goal was pruned by fact partitions; ranking all goals")
            eliminated = {goal: reason for goal, reason in eliminated.items() if goal not in survivors}
    returned = select_goals(ratios, survivors, theta)
    return ScoreOutcome(ratios, eliminated, returned, anomaly)


def filter_candidate_goals(
    problem: GoalRecognitionProblem,
    landmark_graphs: Mapping[Goal, LandmarkGraph],
    partitions: FactPartitions,
    theta: float = 0.0,
    *,
    literal_partition_test: bool = False,
) -> List[Goal]:
    return evaluate_filter(
        problem, landmark_graphs, partitions, theta, literal_partition_test=literal_partition_test
    ).returned


def select_goals(scores: Mapping[Goal, float], candidates: Sequence[Goal], theta: float) -> List[Goal]:
    """Цели с оценкой не ниже max − θ, в порядке кандидатов."""
    if not candidates:
        return []
    best = max(scores[goal] for goal in candidates)
    return [goal for goal in candidates if scores[goal] >= best - theta - TOLERANCE]


class RecognitionResult:
    def __init__(
        self,
        method: str,
        theta: float,
        goals: Sequence[Goal],
        scores: Mapping[Goal, float],
        returned: Iterable[Goal],
        eliminated: Optional[Mapping[Goal, str]] = None,
        *,
        timings: Optional[Mapping[str, float]] = None,
        report: Iterable[str] = (),
        anomaly: bool = False,
    ):
        self.method = method
        self.theta = theta
        self.goals: List[Goal] = list(goals)
        self.scores: Dict[Goal, float] = dict(scores)
        self.returned: List[Goal] = list(returned)
        self.eliminated: Dict[Goal, str] = dict(eliminated or {})
        self.timings: Dict[str, float] = {"extraction": 0.0, "recognition": 0.0}
        self.timings.update(timings or {})
        self.report: List[str] = list(report)
        self.anomaly = anomaly

    @property
    def time_s(self) -> float:
        return self.timings["extraction"] + self.timings["recognition"]

    @property
    def ranked(self) -> List[Goal]:
        """Цели по убыванию оценки; при равенстве в порядке кандидатов."""
        order = {goal: position for position, goal in enumerate(self.goals)}
        return sorted(self.goals, key=lambda goal: (-self.scores[goal], order[goal]))

    @property
    def best(self) -> Optional[Goal]:
        return self.returned[0] if self.returned else None

    def __contains__(self, goal: object) -> bool:
        return goal in self.returned

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "theta": self.theta,
            "scores": [
                {
                    "goal": format_goal(goal),
                    "score": round(self.scores[goal], 3),
                    "returned": goal in self.returned,
                    "eliminated": self.eliminated.get(goal),
                }
                for goal in self.ranked
            ],
            "returned": [format_goal(goal) for goal in self.returned],
            "timings": {name: round(value, 3) for name, value in self.timings.items()},
            "report": list(self.report),
            "anomaly": self.anomaly,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __repr__(self) -> str:
        return f"RecognitionResult({self.method}, θ={self.theta}, returned {len(self.returned)}/{len(self.goals)})"


def recognize_gc(problem: GoalRecognitionProblem, theta: float = 0.0, **options) -> RecognitionResult:
    from components.scorer import GoalCompletionScorer
    from engine import Recognizer

    return Recognizer(problem, GoalCompletionScorer(), **options).recognize(theta)


def recognize_uniq(problem: GoalRecognitionProblem, theta: float = 0.0, **options) -> RecognitionResult:
    from components.scorer import UniquenessScorer
    from engine import Recognizer

    return Recognizer(problem, UniquenessScorer(), **options).recognize(theta)


def recognize_filter(problem: GoalRecognitionProblem, theta: float = 0.0, **options) -> RecognitionResult:
    from components.scorer import FilterScorer
    from engine import Recognizer

    return Recognizer(problem, FilterScorer(), **options).recognize(theta)
