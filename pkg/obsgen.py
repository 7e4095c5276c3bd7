"""Наблюдения по плану: полные, с пропусками и с шумом."""
from __future__ import annotations

from typing import List, Sequence
import math
import random

from actions import Action
import exceptions

# Уровни наблюдаемости из стандартных наборов данных.
STANDARD_OBSERVABILITY = (0.1, 0.25, 0.3, 0.5, 0.7, 0.75, 1.0)


class ObservationSpec:
    def __init__(self, observability: float = 1.0, noise_count: int = 0, seed: int = 0):
        if not 0 < observability <= 1:
            raise ValueError(f"Observability must be in (0, 1], got {observability}.")
        if noise_count < 0:
            raise ValueError(f"Noise count must be non-negative, got {noise_count}.")
        self.observability = observability
        self.noise_count = noise_count
        self.seed = seed

    def __repr__(self) -> str:
        return f"ObservationSpec({self.observability}, noise={self.noise_count}, seed={self.seed})"


def kept_count(plan_length: int, observability: float) -> int:
    """⌈observability × |plan|⌉; округление защищает от 0.7 × 10 = 7.000000000000001."""
    return min(plan_length, math.ceil(round(observability * plan_length, 9)))


def project_missing(plan: Sequence[Action], spec: ObservationSpec) -> List[Action]:
    """Оставить ⌈observability × |plan|⌉ действий плана в исходном порядке.

Позиции берутся префиксом одной перестановки, зависящей только от seed,
так что при одном seed наблюдения для меньшей наблюдаемости входят в
наблюдения для большей.
    """
    plan = list(plan)
    if not plan:
        return []
    rng = random.Random(spec.seed)
    order = rng.sample(range(len(plan)), len(plan))
    kept = sorted(order[: kept_count(len(plan), spec.observability)])
    return [plan[position] for position in kept]


def inject_noise(
    observations: Sequence[Action],
    spec: ObservationSpec,
    grounded_actions: Sequence[Action],
    plan: Sequence[Action],
) -> List[Action]:
    """Вставить `noise_count` действий, не входящих в план, в случайные места.

Шумовые действия не обязаны быть применимы в своём месте. Порядок
настоящих наблюдений сохраняется.
    """
    observations = list(observations)
    if spec.noise_count == 0:
        return observations
    in_plan = set(plan)
    pool = sorted((action for action in grounded_actions if action not in in_plan), key=lambda a: (a.name, a.args))
    if len(pool) < spec.noise_count:
        raise exceptions.InsufficientNoiseError(
            f"Only {len(pool)} actions lie outside the plan, {spec.noise_count} noise actions requested."
        )
    rng = random.Random(f"{spec.seed}:noise")
    for action in rng.sample(pool, spec.noise_count):
        observations.insert(rng.randint(0, len(observations)), action)
    return observations


def observe(plan: Sequence[Action], spec: ObservationSpec, grounded_actions: Sequence[Action]) -> List[Action]:
    return inject_noise(project_missing(plan, spec), spec, grounded_actions, plan)
