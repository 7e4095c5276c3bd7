from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, NamedTuple, Tuple
import logging

from facts import GroundFact, State
import exceptions

logger = logging.getLogger(__name__)


class Atom(NamedTuple):
    """Атом схемы оператора: аргументы: переменные (?x) или константы."""

    predicate: str
    terms: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate,) + self.terms) + ")"

    def variables(self) -> Tuple[str, ...]:
        return tuple(term for term in self.terms if term.startswith("?"))

    def bind(self, binding: Dict[str, str]) -> GroundFact:
        return GroundFact(self.predicate, tuple(binding.get(term, term) for term in self.terms))


class Operator:
    """Схема действия STRIPS: имя, типизированные параметры, pre/add/del."""

    def __init__(
        self,
        name: str,
        parameters: Iterable[Tuple[str, str]] = (),
        pre: Iterable[Atom] = (),
        add: Iterable[Atom] = (),
        delete: Iterable[Atom] = (),
    ):
        self.name = name
        self.parameters: Tuple[Tuple[str, str], ...] = tuple(parameters)
        self.pre: Tuple[Atom, ...] = tuple(pre)
        self.add: Tuple[Atom, ...] = tuple(add)
        self.delete: Tuple[Atom, ...] = tuple(delete)

        declared = {variable for variable, _ in self.parameters}
        for atom in self.pre + self.add + self.delete:
            for variable in atom.variables():
                if variable not in declared:
                    raise exceptions.PDDLSemanticError(
                        f"Variable {variable} of {atom} is not a parameter of action {name}."
                    )

    @property
    def arity(self) -> int:
        return len(self.parameters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Operator) and (
            self.name,
            self.parameters,
            self.pre,
            self.add,
            self.delete,
        ) == (other.name, other.parameters, other.pre, other.add, other.delete)

    def __hash__(self) -> int:
        return hash((self.name, self.parameters))

    def __repr__(self) -> str:
        return f"Operator({self.name}/{self.arity})"


class Action:
    """Заземлённый оператор. Стоимость всегда 1."""

    cost = 1

    def __init__(
        self,
        id: int,
        name: str,
        args: Tuple[str, ...],
        pre: Iterable[GroundFact],
        add: Iterable[GroundFact],
        delete: Iterable[GroundFact],
    ):
        self.id = id
        self.name = name
        self.args = tuple(args)
        self.pre: FrozenSet[GroundFact] = frozenset(pre)
        self.add: FrozenSet[GroundFact] = frozenset(add)
        self.delete: FrozenSet[GroundFact] = frozenset(delete)

    @property
    def signature(self) -> str:
        return "(" + " ".join((self.name,) + self.args) + ")"

    def is_applicable(self, state: State) -> bool:
        return state.satisfies(self.pre)

    def perform(self, state: State) -> State:
        """Выполнить действие в состоянии `state` и вернуть новое состояние.

Сначала удаляется del-список, затем добавляется add-список.
        """
        if not self.is_applicable(state):
            missing = ", ".join(str(fact) for fact in sorted(self.pre - state.facts))
            raise exceptions.PreconditionViolation(f"{self.signature} is not applicable: missing {missing}.")
        return State((state.facts - self.delete) | self.add)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Action) and self.signature == other.signature

    def __hash__(self) -> int:
        return hash(self.signature)

    def __lt__(self, other: Action) -> bool:
        return (self.name, self.args) < (other.name, other.args)

    def __repr__(self) -> str:
        return f"Action({self.id}, {self.signature})"


def applicable(state: State, action: Action) -> bool:
    return action.is_applicable(state)


def apply(state: State, action: Action) -> State:
    return action.perform(state)


def replay(state: State, plan: Iterable[Action]) -> State:
    """Проиграть последовательность действий. PreconditionViolation на первом неприменимом."""
    for action in plan:
        state = action.perform(state)
    return state


def is_valid_plan(initial: State, plan: Iterable[Action], goal: Iterable[GroundFact]) -> bool:
    try:
        final = replay(initial, plan)
    except exceptions.PreconditionViolation:
        return False
    return final.satisfies(goal)


def instantiate(operator: Operator, args: Tuple[str, ...], id: int = -1) -> Action:
    """Заземлить `operator` на объекты `args`.

Если факт одновременно добавляется и удаляется, побеждает добавление.
    """
    binding = {variable: arg for (variable, _), arg in zip(operator.parameters, args)}
    pre = {atom.bind(binding) for atom in operator.pre}
    add = {atom.bind(binding) for atom in operator.add}
    delete = {atom.bind(binding) for atom in operator.delete}

    overlap = add & delete
    if overlap:
        logger.warning(
            "(%s %s) both adds and deletes %s; keeping the fact.",
            operator.name,
            " ".join(args),
            ", ".join(str(fact) for fact in sorted(overlap)),
        )
        delete -= overlap

    return Action(id, operator.name, args, pre, add, delete)
