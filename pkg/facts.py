"""Базовые факты STRIPS и состояние с закрытым миром."""
from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Tuple


class GroundFact(NamedTuple):
    predicate: str
    args: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate,) + self.args) + ")"

    @classmethod
    def of(cls, predicate: str, *args: str) -> GroundFact:
        """Короткий конструктор: GroundFact.of("on", "a", "b")."""
        return cls(predicate.lower(), tuple(arg.lower() for arg in args))


Goal = FrozenSet[GroundFact]


def goal_of(facts: Iterable[GroundFact]) -> Goal:
    return frozenset(facts)


def format_goal(goal: Iterable[GroundFact]) -> str:
    return " ".join(str(fact) for fact in sorted(goal))


class State:
    """Состояние как конечное множество фактов. Всё, чего нет в множестве, ложно."""

    __slots__ = ("facts",)

    def __init__(self, facts: Iterable[GroundFact] = ()):
        self.facts: FrozenSet[GroundFact] = frozenset(facts)

    def holds(self, fact: GroundFact) -> bool:
        return fact in self.facts

    def satisfies(self, facts: Iterable[GroundFact]) -> bool:
        return self.facts.issuperset(facts)

    def __contains__(self, fact: object) -> bool:
        return fact in self.facts

    def __iter__(self) -> Iterator[GroundFact]:
        return iter(sorted(self.facts))

    def __len__(self) -> int:
        return len(self.facts)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, State) and self.facts == other.facts

    def __hash__(self) -> int:
        return hash(self.facts)

    def __repr__(self) -> str:
        return f"State({format_goal(self.facts)})"


class FactTable:
    """Интернирование фактов: каждому факту плотный целый номер.

Номера выдаются в порядке первого появления, поэтому при одинаковом порядке
заземления таблица совпадает от запуска к запуску.
    """

    def __init__(self) -> None:
        self._index: Dict[GroundFact, int] = {}
        self.facts: List[GroundFact] = []

    def intern(self, fact: GroundFact) -> int:
        index = self._index.get(fact)
        if index is None:
            index = len(self.facts)
            self._index[fact] = index
            self.facts.append(fact)
        return index

    def index(self, fact: GroundFact) -> int:
        """Номер факта. KeyError, если факт не встречался при заземлении."""
        return self._index[fact]

    def get(self, fact: GroundFact, default: int = -1) -> int:
        return self._index.get(fact, default)

    def ids(self, facts: Iterable[GroundFact]) -> List[int]:
        return sorted(self._index[fact] for fact in facts if fact in self._index)

    def __contains__(self, fact: object) -> bool:
        return fact in self._index

    def __len__(self) -> int:
        return len(self.facts)

    def __getitem__(self, index: int) -> GroundFact:
        return self.facts[index]
