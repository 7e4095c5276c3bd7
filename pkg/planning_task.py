from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from actions import Action, Operator
from facts import FactTable, Goal, GroundFact, State, goal_of
import exceptions

ROOT_TYPE = "object"


class PlanningDomain:
    """Домен STRIPS: предикаты, операторы, типы и константы.

`types` отображает тип в его родителя, `constants`: константу в её тип,
`predicates`: имя предиката в кортеж типов аргументов.
    """

    def __init__(
        self,
        name: str,
        *,
        requirements: Iterable[str] = (),
        types: Optional[Dict[str, str]] = None,
        constants: Optional[Dict[str, str]] = None,
        predicates: Optional[Dict[str, Tuple[str, ...]]] = None,
        operators: Iterable[Operator] = (),
    ):
        self.name = name
        self.requirements: Tuple[str, ...] = tuple(requirements)
        self.types: Dict[str, str] = dict(types or {})
        self.constants: Dict[str, str] = dict(constants or {})
        self.predicates: Dict[str, Tuple[str, ...]] = dict(predicates or {})
        self.operators: List[Operator] = list(operators)

        seen = set()
        for operator in self.operators:
            if operator.name in seen:
                raise exceptions.PDDLSemanticError(f"Action {operator.name} is declared twice.")
            seen.add(operator.name)

    @property
    def typed(self) -> bool:
        return ":typing" in self.requirements or bool(self.types)

    def operator(self, name: str) -> Operator:
        for operator in self.operators:
            if operator.name == name:
                return operator
        raise KeyError(name)

    def is_subtype(self, type_name: str, ancestor: str) -> bool:
        """True, если `type_name` совпадает с `ancestor` или наследует его."""
        if ancestor == ROOT_TYPE:
            return True
        seen = set()
        current: Optional[str] = type_name
        while current is not None and current not in seen:
            if current == ancestor:
                return True
            seen.add(current)
            current = self.types.get(current)
        return False

    def known_type(self, type_name: str) -> bool:
        return type_name == ROOT_TYPE or type_name in self.types or type_name in self.types.values()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PlanningDomain) and (
            self.name,
            set(self.requirements),
            self.types,
            self.constants,
            self.predicates,
            self.operators,
        ) == (
            other.name,
            set(other.requirements),
            other.types,
            other.constants,
            other.predicates,
            other.operators,
        )

    def __repr__(self) -> str:
        return f"PlanningDomain({self.name}, {len(self.predicates)} predicates, {len(self.operators)} operators)"


class PlanningInstance:
    """Задача планирования: домен, объекты, начальное состояние и цель."""

    def __init__(
        self,
        name: str,
        domain: PlanningDomain,
        objects: Dict[str, str],
        initial: State,
        goal: Iterable[GroundFact] = (),
    ):
        self.name = name
        self.domain = domain
        self.objects: Dict[str, str] = dict(objects)
        self.initial = initial
        self.goal: Goal = goal_of(goal)

    @property
    def universe(self) -> Dict[str, str]:
        """Объекты задачи вместе с константами домена."""
        merged = dict(self.domain.constants)
        merged.update(self.objects)
        return merged

    def with_goal(self, goal: Iterable[GroundFact]) -> PlanningInstance:
        return PlanningInstance(self.name, self.domain, self.objects, self.initial, goal)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PlanningInstance) and (
            self.name,
            self.domain,
            self.objects,
            self.initial,
            self.goal,
        ) == (other.name, other.domain, other.objects, other.initial, other.goal)

    def __repr__(self) -> str:
        return f"PlanningInstance({self.name}, {len(self.objects)} objects, goal of {len(self.goal)})"


def _csr(rows: Sequence[Sequence[int]]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Плоский массив значений, массив владельцев и длины строк."""
    counts = np.fromiter((len(row) for row in rows), dtype=np.intp, count=len(rows))
    flat = np.fromiter((value for row in rows for value in row), dtype=np.intp, count=int(counts.sum()))
    owner = np.repeat(np.arange(len(rows), dtype=np.intp), counts)
    return flat, owner, counts


class GroundedTask:
    """Заземлённые действия с интернированными фактами.

Массивы pre_flat/pre_owner (и такие же для add и del) описывают списки
номеров фактов по действиям: факт pre_flat[k] принадлежит действию
pre_owner[k]. На них держится вся арифметика RPG и h_add.
    """

    def __init__(self, actions: Sequence[Action], initial: State, facts: Optional[FactTable] = None):
        self.actions: List[Action] = list(actions)
        self.initial = initial
        self.facts = facts if facts is not None else FactTable()

        for fact in sorted(initial.facts):
            self.facts.intern(fact)
        pre_rows, add_rows, del_rows = [], [], []
        for action in self.actions:
            pre_rows.append(sorted(self.facts.intern(fact) for fact in action.pre))
            add_rows.append(sorted(self.facts.intern(fact) for fact in action.add))
            del_rows.append(sorted(self.facts.intern(fact) for fact in action.delete))

        self.pre_flat, self.pre_owner, self.pre_count = _csr(pre_rows)
        self.pre_offsets = np.concatenate(([0], np.cumsum(self.pre_count)[:-1])).astype(np.intp)
        self.add_flat, self.add_owner, _ = _csr(add_rows)
        self.del_flat, self.del_owner, _ = _csr(del_rows)

        self._achievers: List[List[int]] = [[] for _ in range(len(self.facts))]
        for action_id, row in enumerate(add_rows):
            for fact_id in row:
                self._achievers[fact_id].append(action_id)

        self._by_signature: Dict[str, Action] = {action.signature.lower(): action for action in self.actions}
        self._position: Dict[str, int] = {action.signature: index for index, action in enumerate(self.actions)}

    @property
    def num_facts(self) -> int:
        return len(self.facts)

    @property
    def num_actions(self) -> int:
        return len(self.actions)

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self) -> Iterator[Action]:
        return iter(self.actions)

    def __getitem__(self, action_id: int) -> Action:
        return self.actions[action_id]

    def position(self, action: Action) -> int:
        """Номер действия в этой задаче (совпадает с action.id после ground)."""
        return self._position[action.signature]

    def pre_ids(self, action_id: int) -> np.ndarray:
        start = self.pre_offsets[action_id]
        return self.pre_flat[start : start + self.pre_count[action_id]]

    def achievers(self, fact: GroundFact) -> List[int]:
        """Номера действий, добавляющих `fact`."""
        fact_id = self.facts.get(fact)
        if fact_id < 0 or fact_id >= len(self._achievers):
            return []
        return list(self._achievers[fact_id])

    def achievers_of_any(self, facts: Iterable[GroundFact]) -> List[int]:
        found = set()
        for fact in facts:
            found.update(self.achievers(fact))
        return sorted(found)

    def action_by_signature(self, signature: str) -> Optional[Action]:
        """Найти действие по сигнатуре вида "(stack e d)" без учёта регистра и пробелов."""
        text = " ".join(signature.strip().lower().replace("(", " ").replace(")", " ").split())
        return self._by_signature.get(f"({text})")

    def fact_mask(self, facts: Iterable[GroundFact]) -> np.ndarray:
        mask = np.zeros(self.num_facts, dtype=bool)
        mask[self.facts.ids(facts)] = True
        return mask

    def action_mask(self, action_ids: Iterable[int]) -> np.ndarray:
        mask = np.zeros(self.num_actions, dtype=bool)
        mask[list(action_ids)] = True
        return mask

    def __repr__(self) -> str:
        return f"GroundedTask({self.num_actions} actions, {self.num_facts} facts)"


def as_task(actions: Sequence[Action], initial: State) -> GroundedTask:
    """Принять либо готовую GroundedTask, либо простой список действий."""
    if isinstance(actions, GroundedTask):
        return actions
    return GroundedTask(actions, initial)
