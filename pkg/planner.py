"""Жадный поиск «сначала лучший» с аддитивной релаксированной эвристикой.

Нужен только для построения наборов данных: план должен быть допустимым,
но не обязан быть оптимальным.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import heapq
import logging

import numpy as np

from actions import Action
from facts import GroundFact, State, format_goal, goal_of
from planning_task import GroundedTask, as_task
import exceptions

logger = logging.getLogger(__name__)

NODE_BUDGET = 200000


class AdditiveHeuristic:
    """h_add. Стоимость факта равна минимуму по достигателям (1 + сумма стоимостей
предусловий), стоимость цели равна сумме стоимостей её фактов.
    """

    def __init__(self, task: GroundedTask, goal: Iterable[GroundFact]):
        self.task = task
        goal = list(goal)
        self.unknown_goal = any(fact not in task.facts for fact in goal)
        self.goal_ids = np.array(task.facts.ids(goal), dtype=np.intp)

    def costs(self, state: np.ndarray) -> np.ndarray:
        task = self.task
        cost = np.where(state, 0.0, np.inf)
        while True:
            action_cost = 1.0 + np.bincount(task.pre_owner, weights=cost[task.pre_flat], minlength=task.num_actions)
            candidate = np.full(task.num_facts, np.inf)
            np.minimum.at(candidate, task.add_flat, action_cost[task.add_owner])
            updated = np.minimum(cost, candidate)
            if np.array_equal(updated, cost):
                return cost
            cost = updated

    def __call__(self, state: np.ndarray) -> float:
        if self.unknown_goal:
            return float("inf")
        return float(self.costs(state)[self.goal_ids].sum())


class _Successors:
    def __init__(self, task: GroundedTask):
        self.task = task
        self.add_ids: List[np.ndarray] = [np.array(task.facts.ids(a.add), dtype=np.intp) for a in task]
        self.del_ids: List[np.ndarray] = [np.array(task.facts.ids(a.delete), dtype=np.intp) for a in task]

    def applicable(self, state: np.ndarray) -> np.ndarray:
        task = self.task
        counts = np.bincount(task.pre_owner, weights=state[task.pre_flat].astype(np.float64), minlength=task.num_actions)
        return np.flatnonzero(counts >= task.pre_count)

    def apply(self, state: np.ndarray, action_id: int) -> np.ndarray:
        successor = state.copy()
        successor[self.del_ids[action_id]] = False
        successor[self.add_ids[action_id]] = True
        return successor


def _extract(parents: Dict[bytes, Tuple[Optional[bytes], int]], key: bytes, task: GroundedTask) -> List[Action]:
    plan: List[Action] = []
    while True:
        parent, action_id = parents[key]
        if parent is None:
            break
        plan.append(task[action_id])
        key = parent
    plan.reverse()
    return plan


def find_plan(
    actions: Sequence[Action],
    initial: State,
    goal: Iterable[GroundFact],
    *,
    node_budget: int = NODE_BUDGET,
) -> List[Action]:
    """Найти план для `goal` из `initial`.

Среди узлов с равной эвристикой раньше раскрывается добавленный раньше,
потомки порождаются по возрастанию номера действия, поэтому результат
детерминирован. SearchExhausted, если цель недостижима или исчерпан бюджет
узлов.
    """
    task = as_task(actions, initial)
    goal = goal_of(goal)
    if initial.satisfies(goal):
        return []

    heuristic = AdditiveHeuristic(task, goal)
    successors = _Successors(task)
    goal_mask = task.fact_mask(goal)

    start = task.fact_mask(initial.facts)
    start_h = heuristic(start)
    if np.isinf(start_h):
        raise exceptions.SearchExhausted(f"Goal {format_goal(goal)} is unreachable from the initial state.")
    logger.debug("Initial h value: %s", start_h)

    start_key = start.tobytes()
    parents: Dict[bytes, Tuple[Optional[bytes], int]] = {start_key: (None, -1)}
    states: Dict[bytes, np.ndarray] = {start_key: start}
    counter = 0
    open_list: List[Tuple[float, int, bytes]] = [(start_h, counter, start_key)]
    closed = set()

    while open_list:
        _, _, key = heapq.heappop(open_list)
        if key in closed:
            continue
        closed.add(key)
        if len(closed) > node_budget:
            raise exceptions.SearchExhausted(f"Node budget of {node_budget} exceeded for {format_goal(goal)}.")

        state = states.pop(key)
        for action_id in successors.applicable(state):
            successor = successors.apply(state, int(action_id))
            successor_key = successor.tobytes()
            if successor_key in parents:
                continue
            parents[successor_key] = (key, int(action_id))
            # Ранняя проверка цели.
            if successor[goal_mask].all():
                plan = _extract(parents, successor_key, task)
                logger.debug("Plan of %d actions after %d expansions", len(plan), len(closed))
                return plan
            h = heuristic(successor)
            if np.isinf(h):
                continue
            counter += 1
            states[successor_key] = successor
            heapq.heappush(open_list, (h, counter, successor_key))

    raise exceptions.SearchExhausted(f"Search space exhausted without reaching {format_goal(goal)}.")
