from __future__ import annotations

from typing import FrozenSet, Iterable, Optional, Sequence, Set

from actions import Action
from facts import GroundFact, State


class FactPartitions:
    """Три непересекающихся класса фактов.

strictly_activating: только в предусловиях, никогда не добавляется и не
удаляется; unstable_activating: в предусловиях и удалениях, но не
добавляется; strictly_terminal: только добавляется.
    """

    def __init__(
        self,
        strictly_activating: Iterable[GroundFact] = (),
        unstable_activating: Iterable[GroundFact] = (),
        strictly_terminal: Iterable[GroundFact] = (),
    ):
        self.strictly_activating: FrozenSet[GroundFact] = frozenset(strictly_activating)
        self.unstable_activating: FrozenSet[GroundFact] = frozenset(unstable_activating)
        self.strictly_terminal: FrozenSet[GroundFact] = frozenset(strictly_terminal)

    @property
    def empty(self) -> bool:
        return not (self.strictly_activating or self.unstable_activating or self.strictly_terminal)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FactPartitions) and (
            self.strictly_activating,
            self.unstable_activating,
            self.strictly_terminal,
        ) == (other.strictly_activating, other.unstable_activating, other.strictly_terminal)

    def __repr__(self) -> str:
        return (
            f"FactPartitions(sa={len(self.strictly_activating)}, "
            f"ua={len(self.unstable_activating)}, st={len(self.strictly_terminal)})"
        )


def partition_facts(
    actions: Sequence[Action],
    facts: Optional[Iterable[GroundFact]] = None,
    initial: Optional[State] = None,
    *,
    require_initial: bool = True,
) -> FactPartitions:
    """Разбить факты на классы одним проходом по действиям.

Без `facts` рассматриваются все факты, упомянутые действиями. С
`require_initial=False` условие «f ∈ I» для двух активирующих классов
снимается, и разбиение зависит только от домена.
    """
    in_pre: Set[GroundFact] = set()
    in_add: Set[GroundFact] = set()
    in_del: Set[GroundFact] = set()
    for action in actions:
        in_pre.update(action.pre)
        in_add.update(action.add)
        in_del.update(action.delete)

    universe = set(facts) if facts is not None else in_pre | in_add | in_del
    initial_facts = initial.facts if initial is not None else frozenset()

    def present(fact: GroundFact) -> bool:
        return not require_initial or fact in initial_facts

    strictly_activating = {
        fact for fact in universe if fact in in_pre and fact not in in_add and fact not in in_del and present(fact)
    }
    unstable_activating = {
        fact for fact in universe if fact in in_pre and fact in in_del and fact not in in_add and present(fact)
    }
    strictly_terminal = {
        fact for fact in universe if fact in in_add and fact not in in_pre and fact not in in_del
    }
    return FactPartitions(strictly_activating, unstable_activating, strictly_terminal)
