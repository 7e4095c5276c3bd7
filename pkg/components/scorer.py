from __future__ import annotations

from typing import TYPE_CHECKING, Dict, Optional

from components.base_component import BaseComponent
from facts import Goal
from recognition import ScoreOutcome, UniquenessTable, evaluate_filter, h_gc, h_uniq, select_goals

if TYPE_CHECKING:
    from engine import Recognizer


class Scorer(BaseComponent):
    """Оценивает каждую цель-кандидат. Подключается к Recognizer."""

    parent: Recognizer
    name = "?"

    def scores(self) -> Dict[Goal, float]:
        raise NotImplementedError()

    def evaluate(self, theta: float) -> ScoreOutcome:
        """Оценки, исключённые цели и ответ по правилу max − θ.

Исключаются только цели, недостижимые в релаксированной задаче.
        """
        scores = self.scores()
        graphs = self.recognizer.graphs
        goals = self.recognizer.problem.candidate_goals
        eliminated = {
            goal: "unsolvable in the delete relaxation" for goal in goals if not graphs[goal].solvable
        }
        survivors = [goal for goal in goals if goal not in eliminated]
        return ScoreOutcome(scores, eliminated, select_goals(scores, survivors, theta), False)


class GoalCompletionScorer(Scorer):
    name = "gc"

    def scores(self) -> Dict[Goal, float]:
        recognizer = self.recognizer
        return {
            goal: h_gc(
                goal,
                recognizer.achieved[goal],
                recognizer.graphs[goal],
                include_disjunctive=recognizer.include_disjunctive,
            )
            for goal in recognizer.problem.candidate_goals
        }


class UniquenessScorer(Scorer):
    name = "uniq"

    def __init__(self) -> None:
        self._table: Optional[UniquenessTable] = None

    @property
    def table(self) -> UniquenessTable:
        """Таблица уникальности по графам всех разрешимых целей."""
        if self._table is None:
            graphs = self.recognizer.graphs
            self._table = UniquenessTable.build(graph for graph in graphs.values() if graph.solvable)
        return self._table

    def scores(self) -> Dict[Goal, float]:
        recognizer = self.recognizer
        return {
            goal: h_uniq(
                goal,
                recognizer.achieved[goal],
                recognizer.graphs[goal],
                self.table,
                include_disjunctive=recognizer.include_disjunctive,
            )
            for goal in recognizer.problem.candidate_goals
        }


class FilterScorer(Scorer):
    """Фильтр целей как самостоятельный распознаватель, оценка равна доле
достигнутых ориентиров; цели, противоречащие разбиению фактов, отсеиваются.
    """

    name = "filter"

    def scores(self) -> Dict[Goal, float]:
        return self.evaluate(0.0).scores

    def evaluate(self, theta: float) -> ScoreOutcome:
        recognizer = self.recognizer
        return evaluate_filter(
            recognizer.problem,
            recognizer.graphs,
            recognizer.partitions,
            theta,
            literal_partition_test=recognizer.literal_partition_test,
        )
