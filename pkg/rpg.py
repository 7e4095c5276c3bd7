"""Релаксированный граф планирования (без списков удаления).

Уровни считаются счётчиками: действие становится применимым, как только
число достигнутых предусловий равно их общему числу. Хранятся только
первые уровни фактов и действий.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence
import math

import numpy as np

from actions import Action
from facts import GroundFact, State
from planning_task import GroundedTask, as_task

UNREACHABLE = math.inf


def _action_ids(task: GroundedTask, excluded: Iterable) -> np.ndarray:
    ids = [task.position(item) if isinstance(item, Action) else int(item) for item in excluded]
    return task.action_mask(ids)


class RelaxedPlanningGraph:
    def __init__(self, task: GroundedTask, fact_levels: np.ndarray, action_levels: np.ndarray, num_levels: int):
        self.task = task
        self.fact_levels = fact_levels
        self.action_levels = action_levels
        self.num_levels = num_levels

    def fact_level(self, fact: GroundFact) -> float:
        """Первый уровень факта или UNREACHABLE."""
        fact_id = self.task.facts.get(fact)
        if fact_id < 0 or fact_id >= len(self.fact_levels):
            return UNREACHABLE
        level = self.fact_levels[fact_id]
        return UNREACHABLE if np.isinf(level) else int(level)

    def action_level(self, action: Action) -> float:
        level = self.action_levels[self.task.position(action)]
        return UNREACHABLE if np.isinf(level) else int(level)

    def reachable(self, fact: GroundFact) -> bool:
        return self.fact_level(fact) != UNREACHABLE

    def reached_mask(self) -> np.ndarray:
        return np.isfinite(self.fact_levels)

    def action_reachable(self, action_id: int) -> bool:
        """Все предусловия действия достижимы (исключённые действия тоже проверяются)."""
        return bool(np.isfinite(self.fact_levels[self.task.pre_ids(action_id)]).all())

    def satisfies(self, goal: Iterable[GroundFact]) -> bool:
        return all(self.reachable(fact) for fact in goal)


def _fixpoint(
    task: GroundedTask,
    initial: State,
    excluded_mask: np.ndarray,
    stop_mask: Optional[np.ndarray] = None,
) -> RelaxedPlanningGraph:
    num_facts, num_actions = task.num_facts, task.num_actions
    reached = task.fact_mask(initial.facts)
    fact_levels = np.full(num_facts, np.inf)
    fact_levels[reached] = 0
    action_levels = np.full(num_actions, np.inf)
    allowed = ~excluded_mask

    level = 0
    while True:
        if stop_mask is not None and reached[stop_mask].all():
            break
        counts = np.bincount(task.pre_owner, weights=reached[task.pre_flat].astype(np.float64), minlength=num_actions)
        ready = allowed & np.isinf(action_levels) & (counts >= task.pre_count)
        if not ready.any():
            break
        action_levels[ready] = level

        added = np.zeros(num_facts, dtype=bool)
        added[task.add_flat[ready[task.add_owner]]] = True
        added &= ~reached
        if not added.any():
            break
        level += 1
        fact_levels[added] = level
        reached |= added

    return RelaxedPlanningGraph(task, fact_levels, action_levels, level + 1)


def build_rpg(
    actions: Sequence[Action],
    initial: State,
    excluded: Iterable = (),
) -> RelaxedPlanningGraph:
    """Построить RPG до неподвижной точки.

`actions`: GroundedTask или список действий, `excluded`: действия или их
номера, которые никогда не применяются.
    """
    task = as_task(actions, initial)
    return _fixpoint(task, initial, _action_ids(task, excluded))


def relaxed_solvable(
    actions: Sequence[Action],
    initial: State,
    goal: Iterable[GroundFact],
    excluded: Iterable = (),
) -> bool:
    """True, если все факты цели достижимы в RPG без действий `excluded`."""
    task = as_task(actions, initial)
    goal = list(goal)
    pending = [fact for fact in goal if fact not in initial]
    if not pending:
        return True
    if any(fact not in task.facts for fact in pending):
        return False
    stop_mask = task.fact_mask(pending)
    graph = _fixpoint(task, initial, _action_ids(task, excluded), stop_mask)
    return bool(graph.reached_mask()[stop_mask].all())
