"""Пакетная оценка распознавателей на наборах данных."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union
import logging
import os
import signal
import threading

import pandas as pd

from dataset import DatasetBundle, LoadedBundle, find_bundles, load_bundle
from engine import Recognizer
from facts import Goal
from recognition import RecognitionResult
from components.scorer import FilterScorer, GoalCompletionScorer, Scorer, UniquenessScorer
import exceptions

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = float(os.environ.get("GOALREC_TIMEOUT", 1200.0))

METHODS: Dict[str, Callable[[], Scorer]] = {
    "gc": GoalCompletionScorer,
    "uniq": UniquenessScorer,
    "filter": FilterScorer,
}

COLUMN_TYPES: Dict[str, type] = {
    "domain": str,
    "observability": float,
    "goals": int,
    "observations": int,
    "method": str,
    "theta": float,
    "time_s": float,
    "correct": bool,
    "spread": int,
    "fpr": float,
    "bundle": str,
}
REPORT_COLUMNS = tuple(COLUMN_TYPES)
GROUP_KEYS = ("domain", "observability", "method", "theta")
ROC_KEYS = ("method", "theta")


@contextmanager
def deadline(seconds: Optional[float]) -> Iterator[None]:
    """ProblemTimeout, если блок выполняется дольше `seconds`.

Работает через SIGALRM и только в главном потоке; иначе ограничения нет.
    """
    usable = (
        seconds is not None
        and seconds > 0
        and hasattr(signal, "SIGALRM")
        and threading.current_thread() is threading.main_thread()
    )
    if not usable:
        yield
        return

    def expire(signum, frame):
        raise exceptions.ProblemTimeout(f"Problem exceeded the {seconds:g} s timeout.")

    previous = signal.signal(signal.SIGALRM, expire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, previous)


class MetricsRow:
    def __init__(
        self,
        bundle: str,
        domain: str,
        observability: float,
        num_goals: int,
        num_observations: int,
        method: str,
        theta: float,
        time_s: float,
        correct: bool,
        spread: int,
    ):
        self.bundle = bundle
        self.domain = domain
        self.observability = observability
        self.num_goals = num_goals
        self.num_observations = num_observations
        self.method = method
        self.theta = theta
        self.time_s = time_s
        self.correct = correct
        self.spread = spread

    @property
    def fpr(self) -> float:
        """(|returned| − [G* ∈ returned]) / (|𝒢| − 1); 0 для одной цели."""
        if self.num_goals <= 1:
            return 0.0
        return (self.spread - int(self.correct)) / (self.num_goals - 1)

    @classmethod
    def from_result(
        cls, bundle: DatasetBundle, loaded: LoadedBundle, result: RecognitionResult
    ) -> MetricsRow:
        correct = real_goal_returned(result, loaded.real_goal)
        return cls(
            str(bundle.directory),
            loaded.domain.name,
            bundle.observability,
            len(loaded.problem.candidate_goals),
            len(loaded.problem.observations),
            result.method,
            result.theta,
            result.time_s,
            correct,
            len(result.returned),
        )

    def as_tuple(self) -> tuple:
        return (
            self.domain,
            self.observability,
            self.num_goals,
            self.num_observations,
            self.method,
            self.theta,
            self.time_s,
            self.correct,
            self.spread,
            self.fpr,
            self.bundle,
        )

    def __repr__(self) -> str:
        return f"MetricsRow({self.bundle}, {self.method}, θ={self.theta}, correct={self.correct})"


class MetricsReport:
    """Строки оценки и упавшие задачи; сводки считаются по таблице pandas."""

    def __init__(self, rows: Sequence[MetricsRow] = (), failures: Sequence[Tuple[str, str]] = ()):
        self.rows: List[MetricsRow] = list(rows)
        self.failures: List[Tuple[str, str]] = list(failures)

    def frame(self) -> pd.DataFrame:
        """Одна строка таблицы на (набор, метод, θ), столбцы REPORT_COLUMNS."""
        table = pd.DataFrame([row.as_tuple() for row in self.rows], columns=list(REPORT_COLUMNS))
        return table.astype(COLUMN_TYPES)

    def _mean(self, column: str) -> float:
        if not self.rows:
            return 0.0
        return float(self.frame()[column].mean())

    @property
    def accuracy(self) -> float:
        return self._mean("correct")

    @property
    def mean_spread(self) -> float:
        return self._mean("spread")

    @property
    def mean_time(self) -> float:
        return self._mean("time_s")

    def summary(self, by: Sequence[str] = GROUP_KEYS) -> pd.DataFrame:
        """Средние по группам `by`: точность (она же TPR), разброс, время и FPR.

Группы идут в порядке сортировки ключа.
        """
        table = (
            self.frame()
            .groupby(list(by), sort=True)
            .agg(
                count=("correct", "size"),
                accuracy=("correct", "mean"),
                spread=("spread", "mean"),
                time_s=("time_s", "mean"),
                fpr=("fpr", "mean"),
            )
        )
        table["tpr"] = table["accuracy"]
        return table.reset_index()

    def roc_points(self) -> pd.DataFrame:
        """(метод, θ, FPR, TPR) по всем задачам."""
        return self.summary(ROC_KEYS)[list(ROC_KEYS) + ["fpr", "tpr"]]


def recognize_bundle(
    loaded: LoadedBundle, method: str, thetas: Sequence[float], options: Optional[dict] = None
) -> List[RecognitionResult]:
    """Один Recognizer на метод: ориентиры извлекаются один раз, каждому θ
достаётся время извлечения плюс время своей оценки.
    """
    if method not in METHODS:
        raise exceptions.Impossible(f"Unknown recognition method {method}.")
    recognizer = Recognizer(loaded.problem, METHODS[method](), **(options or {}))
    return [recognizer.recognize(theta) for theta in thetas]


def run_problem(
    bundle: DatasetBundle,
    method: str,
    theta: float = 0.0,
    *,
    timeout: Optional[float] = DEFAULT_TIMEOUT,
    facts_observations: bool = False,
    options: Optional[dict] = None,
) -> Tuple[MetricsRow, RecognitionResult]:
    loaded = load_bundle(bundle, facts_observations=facts_observations)
    with deadline(timeout):
        (result,) = recognize_bundle(loaded, method, [theta], options)
    return MetricsRow.from_result(bundle, loaded, result), result


def _failure_text(exc: Exception) -> str:
    if isinstance(exc, exceptions.Impossible):
        return str(exc)
    logger.exception("Unexpected %s", type(exc).__name__)
    return f"{type(exc).__name__}: {exc}"


def _evaluate_bundle(
    bundle: DatasetBundle,
    methods: Sequence[str],
    thetas: Sequence[float],
    timeout: Optional[float],
    facts_observations: bool,
    options: Optional[dict],
) -> Tuple[List[MetricsRow], List[str]]:
    """Строки одного набора и тексты ошибок.

Ограничение времени действует на каждый метод отдельно; строки методов,
успевших до сбоя другого метода, сохраняются. Любое исключение при
разборе или распознавании считается сбоем задачи, а не всего прогона.
    """
    try:
        loaded = load_bundle(bundle, facts_observations=facts_observations)
    except Exception as exc:
        return [], [_failure_text(exc)]

    rows: List[MetricsRow] = []
    errors: List[str] = []
    for method in methods:
        try:
            with deadline(timeout):
                results = recognize_bundle(loaded, method, thetas, options)
        except Exception as exc:
            errors.append(f"{method}: {_failure_text(exc)}")
            continue
        rows.extend(MetricsRow.from_result(bundle, loaded, result) for result in results)
    return rows, errors


def evaluate(
    root: Union[str, Path],
    methods: Sequence[str] = ("gc",),
    thetas: Sequence[float] = (0.0,),
    *,
    workers: int = 1,
    timeout: Optional[float] = DEFAULT_TIMEOUT,
    facts_observations: bool = False,
    options: Optional[dict] = None,
) -> MetricsReport:
    """Прогнать все наборы под `root` всеми методами и порогами.

Упавшие задачи записываются в failures и в сводку не входят. Строки
упорядочены по (путь набора, метод, θ) независимо от числа процессов.
    """
    bundles = find_bundles(root)
    if not bundles:
        raise exceptions.BundleError(f"No dataset bundles under {root}.")
    arguments = [(bundle, methods, thetas, timeout, facts_observations, options) for bundle in bundles]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(_evaluate_bundle, *zip(*arguments)))
    else:
        outcomes = [_evaluate_bundle(*args) for args in arguments]

    rows: List[MetricsRow] = []
    failures: List[Tuple[str, str]] = []
    for bundle, (bundle_rows, errors) in zip(bundles, outcomes):
        for error in errors:
            logger.error("%s failed: %s", bundle.directory, error)
            failures.append((str(bundle.directory), error))
        rows.extend(bundle_rows)

    order = {method: position for position, method in enumerate(methods)}
    rows.sort(key=lambda row: (row.bundle, order.get(row.method, len(order)), row.theta))
    report = MetricsReport(rows, failures)
    logger.info(
        "Evaluated %d bundles: %d rows, %d failures, accuracy %.3f",
        len(bundles),
        len(rows),
        len(failures),
        report.accuracy,
    )
    return report


def real_goal_returned(result: RecognitionResult, real_goal: Optional[Goal]) -> bool:
    return real_goal is not None and real_goal in result.returned
