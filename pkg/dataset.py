"""Наборы файлов задачи распознавания.

Каталог набора содержит домен, шаблон задачи с меткой <HYPOTHESIS> внутри
цели, список гипотез (по одной на строку, факты через запятую), наблюдения
(по одному действию на строку) и настоящую гипотезу.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, List, NamedTuple, Optional, Sequence, Union
import logging

from actions import Action
from facts import Goal, format_goal, goal_of
from grounding import build_task
from pddl_parser import format_domain, format_problem, parse_domain, parse_fact_list, parse_problem
from planning_task import PlanningDomain, PlanningInstance
from recognition import GoalRecognitionProblem
import exceptions

logger = logging.getLogger(__name__)

HYPOTHESIS_TOKEN = "<HYPOTHESIS>"

DOMAIN_FILE = "domain.pddl"
TEMPLATE_FILE = "template.pddl"
HYPOTHESES_FILE = "hyps.dat"
OBSERVATIONS_FILE = "obs.dat"
REAL_HYPOTHESIS_FILE = "real_hyp.dat"


class DatasetBundle:
    """Пути к пяти файлам одного набора и его наблюдаемость."""

    def __init__(
        self,
        directory: Union[str, Path],
        *,
        domain: str = DOMAIN_FILE,
        template: str = TEMPLATE_FILE,
        hypotheses: str = HYPOTHESES_FILE,
        observations: str = OBSERVATIONS_FILE,
        real_hypothesis: Optional[str] = REAL_HYPOTHESIS_FILE,
        observability: float = 1.0,
    ):
        self.directory = Path(directory)
        self.domain_file = self.directory / domain
        self.template_file = self.directory / template
        self.hypotheses_file = self.directory / hypotheses
        self.observations_file = self.directory / observations
        self.real_hypothesis_file = self.directory / real_hypothesis if real_hypothesis else None
        self.observability = observability

    @classmethod
    def from_files(
        cls,
        domain: Union[str, Path],
        template: Union[str, Path],
        hypotheses: Union[str, Path],
        observations: Union[str, Path],
        real_hypothesis: Optional[Union[str, Path]] = None,
    ) -> DatasetBundle:
        """Набор из произвольно разложенных файлов (для команды recognize)."""
        bundle = cls(Path(domain).parent)
        bundle.domain_file = Path(domain)
        bundle.template_file = Path(template)
        bundle.hypotheses_file = Path(hypotheses)
        bundle.observations_file = Path(observations)
        bundle.real_hypothesis_file = Path(real_hypothesis) if real_hypothesis else None
        return bundle

    def __repr__(self) -> str:
        return f"DatasetBundle({self.directory}, observability={self.observability})"


class LoadedBundle(NamedTuple):
    problem: GoalRecognitionProblem
    real_goal: Optional[Goal]
    domain: PlanningDomain


def read_text(path: Union[str, Path]) -> str:
    """Содержимое текстового файла; ошибки чтения и декодирования становятся BundleError."""
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise exceptions.BundleError(f"Cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise exceptions.BundleError(f"{path} is not UTF-8 text: {exc.reason} at byte {exc.start}") from exc


def _goal_lines(text: str) -> List[Goal]:
    goals = []
    for line in text.splitlines():
        line = line.split(";", 1)[0].strip()
        if line:
            goals.append(goal_of(parse_fact_list(line)))
    return goals


def load_bundle(bundle: DatasetBundle, *, facts_observations: bool = False) -> LoadedBundle:
    """Прочитать набор и собрать задачу распознавания.

Для каждой гипотезы в шаблон подставляются её факты; начальное состояние и
объекты у всех подстановок общие, поэтому заземляется один раз.
    """
    domain = parse_domain(read_text(bundle.domain_file))
    template = read_text(bundle.template_file)
    if HYPOTHESIS_TOKEN not in template:
        raise exceptions.BundleError(f"{bundle.template_file} has no {HYPOTHESIS_TOKEN} token.")

    goals = _goal_lines(read_text(bundle.hypotheses_file))
    if not goals:
        raise exceptions.BundleError(f"{bundle.hypotheses_file} lists no hypotheses.")
    instances: List[PlanningInstance] = [
        parse_problem(template.replace(HYPOTHESIS_TOKEN, format_goal(goal)), domain) for goal in goals
    ]

    real_goal: Optional[Goal] = None
    if bundle.real_hypothesis_file is not None:
        real = _goal_lines(read_text(bundle.real_hypothesis_file))
        if len(real) != 1:
            raise exceptions.BundleError(f"{bundle.real_hypothesis_file} must hold exactly one hypothesis.")
        real_goal = real[0]
        if real_goal not in goals:
            raise exceptions.BundleError(f"Real hypothesis {format_goal(real_goal)} is not among the hypotheses.")

    task = build_task(domain, instances[0], [instance.goal for instance in instances])
    problem = GoalRecognitionProblem.from_signatures(
        task,
        instances[0].initial,
        [instance.goal for instance in instances],
        read_text(bundle.observations_file).splitlines(),
        facts_observations=facts_observations,
        name=str(bundle.directory),
    )
    logger.debug("Loaded %r as %r", bundle, problem)
    return LoadedBundle(problem, real_goal, domain)


def _goal_text(goal: Goal) -> str:
    return ",".join(str(fact) for fact in sorted(goal))


def write_bundle(
    directory: Union[str, Path],
    instance: PlanningInstance,
    goals: Sequence[Goal],
    observations: Iterable[Action],
    real_goal: Goal,
) -> DatasetBundle:
    """Записать пять файлов набора. Одинаковые входы дают одинаковые байты."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    contents = {
        DOMAIN_FILE: format_domain(instance.domain),
        TEMPLATE_FILE: format_problem(instance, goal_text=f"(and {HYPOTHESIS_TOKEN})"),
        HYPOTHESES_FILE: "".join(_goal_text(goal) + "\n" for goal in goals),
        OBSERVATIONS_FILE: "".join(action.signature + "\n" for action in observations),
        REAL_HYPOTHESIS_FILE: _goal_text(real_goal) + "\n",
    }
    for file_name, text in contents.items():
        (directory / file_name).write_text(text, encoding="utf-8")
    return DatasetBundle(directory)


def observability_of(name: str) -> Optional[float]:
    """"10" → 0.1, "0.5" → 0.5, "100" → 1.0; None, если имя не число."""
    try:
        value = float(name)
    except ValueError:
        return None
    if value <= 0:
        return None
    return value / 100 if value > 1 else value


def find_bundles(root: Union[str, Path]) -> List[DatasetBundle]:
    """Все каталоги под `root` с файлом домена, по возрастанию пути.

Наблюдаемость берётся из ближайшего числового предка каталога набора (сам
каталог вида 007 не считается), не выше `root`; иначе 1.0.
    """
    root = Path(root)
    bundles = []
    for domain_file in sorted(root.rglob(DOMAIN_FILE)):
        directory = domain_file.parent
        observability = 1.0
        for ancestor in directory.parents:
            if ancestor != root and root not in ancestor.parents:
                break
            value = observability_of(ancestor.name)
            if value is not None:
                observability = value
                break
        bundles.append(DatasetBundle(directory, observability=observability))
    return bundles
