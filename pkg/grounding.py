from __future__ import annotations

from typing import Dict, Iterable, List, Sequence
import itertools
import logging

from actions import Action, Operator, instantiate
from facts import FactTable, GroundFact
from planning_task import GroundedTask, PlanningDomain, PlanningInstance

logger = logging.getLogger(__name__)


def _candidates(domain: PlanningDomain, objects: Dict[str, str], type_name: str) -> List[str]:
    return sorted(name for name, object_type in objects.items() if domain.is_subtype(object_type, type_name))


def _bindings(
    domain: PlanningDomain, operator: Operator, objects: Dict[str, str], allow_repeated_objects: bool
) -> Iterable[tuple]:
    pools = [_candidates(domain, objects, type_name) for _, type_name in operator.parameters]
    for args in itertools.product(*pools):
        if not allow_repeated_objects and len(set(args)) != len(args):
            continue
        yield args


def ground(
    domain: PlanningDomain,
    objects: Dict[str, str],
    *,
    allow_repeated_objects: bool = False,
) -> List[Action]:
    """Все типово-согласованные конкретизации операторов домена.

Разным параметрам по умолчанию достаются разные объекты: (stack a a) не
порождается. Порядок лексикографический по сигнатуре, номера действий
совпадают с позицией в списке.
    """
    universe = dict(domain.constants)
    universe.update(objects)

    actions: List[Action] = []
    for operator in domain.operators:
        for args in _bindings(domain, operator, universe, allow_repeated_objects):
            actions.append(instantiate(operator, args))

    actions.sort()
    for index, action in enumerate(actions):
        action.id = index
    logger.debug("Grounded %d actions over %d objects", len(actions), len(universe))
    return actions


def build_task(
    domain: PlanningDomain,
    instance: PlanningInstance,
    extra_goals: Sequence[Iterable[GroundFact]] = (),
    *,
    allow_repeated_objects: bool = False,
) -> GroundedTask:
    """Заземлить задачу и собрать индексы для RPG.

Факты цели и `extra_goals` интернируются заранее, даже если их не добавляет
ни одно действие.
    """
    table = FactTable()
    for fact in sorted(instance.initial.facts):
        table.intern(fact)
    for goal in [instance.goal, *extra_goals]:
        for fact in sorted(goal):
            table.intern(fact)
    actions = ground(domain, instance.objects, allow_repeated_objects=allow_repeated_objects)
    return GroundedTask(actions, instance.initial, table)
