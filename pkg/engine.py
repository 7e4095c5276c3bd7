from __future__ import annotations

from typing import TYPE_CHECKING, Dict, Mapping, Optional
import logging
import time

from facts import Goal, format_goal
from landmarks import MAX_DISJUNCTION_SIZE, LandmarkGraph, extract_for_goals
from message_log import MessageLog
from partitions import FactPartitions, partition_facts
from recognition import AchievedLandmarks, GoalRecognitionProblem, RecognitionResult, compute_achieved_landmarks
import exceptions

if TYPE_CHECKING:
    from components.scorer import Scorer


class Recognizer:
    """Решает одну задачу распознавания выбранным оценщиком.

Графы ориентиров, разбиение фактов и достигнутые ориентиры считаются лениво
и один раз; время извлечения ориентиров учитывается отдельно.
    """

    def __init__(
        self,
        problem: GoalRecognitionProblem,
        scorer: Scorer,
        *,
        max_disjunction_size: int = MAX_DISJUNCTION_SIZE,
        include_disjunctive: bool = False,
        literal_partition_test: bool = False,
        require_initial: bool = True,
        landmark_graphs: Optional[Mapping[Goal, LandmarkGraph]] = None,
    ):
        self.problem = problem
        self.message_log = MessageLog(__name__)
        self.scorer = scorer
        self.scorer.parent = self
        self.max_disjunction_size = max_disjunction_size
        self.include_disjunctive = include_disjunctive
        self.literal_partition_test = literal_partition_test
        self.require_initial = require_initial
        self.timings: Dict[str, float] = {"extraction": 0.0, "recognition": 0.0}

        self._graphs: Optional[Dict[Goal, LandmarkGraph]] = dict(landmark_graphs) if landmark_graphs else None
        self._partitions: Optional[FactPartitions] = None
        self._achieved: Optional[AchievedLandmarks] = None

        for text in problem.unresolved:
            self.message_log.add_message(f"Unresolved observation {text} skipped.", logging.WARNING)

    @property
    def graphs(self) -> Dict[Goal, LandmarkGraph]:
        if self._graphs is None:
            start = time.perf_counter()
            self._graphs = extract_for_goals(
                self.problem.task,
                self.problem.initial,
                self.problem.candidate_goals,
                max_disjunction_size=self.max_disjunction_size,
            )
            self.timings["extraction"] += time.perf_counter() - start
            for goal, graph in self._graphs.items():
                if not graph.solvable:
                    self.message_log.add_message(
                        f"Goal {format_goal(goal)} is unsolvable; scored 0.", logging.WARNING
                    )
        missing = [goal for goal in self.problem.candidate_goals if goal not in self._graphs]
        if missing:
            raise exceptions.Impossible(f"No landmark graph for goal {format_goal(missing[0])}.")
        return self._graphs

    @property
    def partitions(self) -> FactPartitions:
        if self._partitions is None:
            self._partitions = partition_facts(
                self.problem.task,
                initial=self.problem.initial,
                require_initial=self.require_initial,
            )
        return self._partitions

    @property
    def achieved(self) -> AchievedLandmarks:
        if self._achieved is None:
            self._achieved = compute_achieved_landmarks(
                self.problem.initial,
                self.problem.candidate_goals,
                self.problem.observations,
                self.graphs,
            )
        return self._achieved

    def recognize(self, theta: float = 0.0) -> RecognitionResult:
        """Оценить цели и вернуть те, чья оценка не ниже max − θ."""
        graphs = self.graphs
        start = time.perf_counter()
        outcome = self.scorer.evaluate(theta)
        elapsed = time.perf_counter() - start
        self.timings["recognition"] += elapsed

        for goal, reason in outcome.eliminated.items():
            if graphs[goal].solvable:
                self.message_log.add_message(f"Goal {format_goal(goal)} eliminated: {reason}.")
        if outcome.anomaly:
            self.message_log.add_message(
                "Fact partitions pruned every goal; ranked all goals instead.", logging.WARNING
            )

        return RecognitionResult(
            self.scorer.name,
            theta,
            self.problem.candidate_goals,
            outcome.scores,
            outcome.returned,
            outcome.eliminated,
            timings={"extraction": self.timings["extraction"], "recognition": elapsed},
            report=self.message_log.lines(),
            anomaly=outcome.anomaly,
        )
