from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional, TextIO, Type
import argparse
import logging
import random
import sys

from dataset import DatasetBundle, load_bundle, read_text, write_bundle
from domain_factories import DOMAINS
from facts import goal_of
from grounding import build_task
from harness import DEFAULT_TIMEOUT, METHODS, deadline, evaluate, recognize_bundle
from landmarks import MAX_DISJUNCTION_SIZE, extract_for_goals
from obsgen import ObservationSpec, observe
from pddl_parser import parse_domain, parse_fact_list, parse_problem
from planner import find_plan
from procgen import generate_problem
from report_functions import emit_report, render_landmarks, render_result
import exceptions

logger = logging.getLogger(__name__)


def _float_list(text: str) -> List[float]:
    return [float(item) for item in text.replace(",", " ").split()]


class BaseCommandHandler:
    """Обработчик одной подкоманды CLI."""

    name = ""
    help = ""

    def __init__(self, stdout: TextIO = sys.stdout):
        self.stdout = stdout

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        raise NotImplementedError()

    def handle_command(self, args: argparse.Namespace) -> int:
        """Выполнить команду и вернуть код выхода.

Impossible превращается в сообщение на stderr и код 2.
        """
        try:
            return self.perform(args)
        except exceptions.Impossible as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

    def perform(self, args: argparse.Namespace) -> int:
        raise NotImplementedError()


def _add_recognizer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--include-disjunctive", action="store_true", help="score disjunctive landmarks too")
    parser.add_argument(
        "--literal-partition-test", action="store_true", help="filter with the literal fact-partition subset test"
    )
    parser.add_argument(
        "--no-initial-condition",
        dest="require_initial",
        action="store_false",
        help="activating partitions ignore the initial state",
    )
    parser.add_argument("--max-disjunction-size", type=int, default=MAX_DISJUNCTION_SIZE)
    parser.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="seconds per problem")


def _recognizer_options(args: argparse.Namespace) -> dict:
    return {
        "include_disjunctive": args.include_disjunctive,
        "literal_partition_test": args.literal_partition_test,
        "require_initial": args.require_initial,
        "max_disjunction_size": args.max_disjunction_size,
    }


class RecognizeHandler(BaseCommandHandler):
    name = "recognize"
    help = "recognize the goal of one problem"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("-d", "--domain", required=True)
        parser.add_argument("-t", "--template", required=True)
        parser.add_argument("-y", "--hyps", required=True)
        parser.add_argument("-o", "--obs", required=True)
        parser.add_argument("-r", "--real")
        parser.add_argument("-m", "--method", choices=sorted(METHODS), default="uniq")
        parser.add_argument("--theta", type=float, default=0.0)
        parser.add_argument("--facts-obs", action="store_true", help="each observation line is a list of facts")
        parser.add_argument("--json", action="store_true")
        _add_recognizer_flags(parser)

    def perform(self, args: argparse.Namespace) -> int:
        bundle = DatasetBundle.from_files(args.domain, args.template, args.hyps, args.obs, args.real)
        loaded = load_bundle(bundle, facts_observations=args.facts_obs)
        with deadline(args.timeout):
            (result,) = recognize_bundle(loaded, args.method, [args.theta], _recognizer_options(args))
        self.stdout.write(result.to_json() + "\n" if args.json else render_result(result))
        if loaded.real_goal is not None and loaded.real_goal not in result.returned:
            raise exceptions.RecognitionFailed()
        return 0


class EvaluateHandler(BaseCommandHandler):
    name = "evaluate"
    help = "evaluate recognizers over every bundle under a root directory"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("-R", "--root", required=True)
        parser.add_argument("-m", "--methods", nargs="+", choices=sorted(METHODS), default=["gc", "uniq"])
        parser.add_argument("--theta-list", type=_float_list, default=[0.0], help="e.g. 0,0.1,0.2")
        parser.add_argument("--workers", type=int, default=1)
        parser.add_argument("--format", choices=("csv", "json"), default="csv")
        parser.add_argument("--out", help="report file (stdout by default)")
        parser.add_argument("--facts-obs", action="store_true")
        _add_recognizer_flags(parser)

    def perform(self, args: argparse.Namespace) -> int:
        report = evaluate(
            args.root,
            args.methods,
            args.theta_list,
            workers=args.workers,
            timeout=args.timeout,
            facts_observations=args.facts_obs,
            options=_recognizer_options(args),
        )
        if args.out:
            with open(args.out, "w", newline="") as stream:
                emit_report(report, stream, args.format)
        else:
            emit_report(report, self.stdout, args.format)
        if report.failures:
            logger.warning("%d problems failed", len(report.failures))
        return 0


class GenerateDatasetHandler(BaseCommandHandler):
    name = "gen-dataset"
    help = "plan for a problem's goal and write a dataset bundle"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("-d", "--domain", required=True)
        parser.add_argument("-p", "--problem", required=True, help="problem whose goal is the hidden goal")
        parser.add_argument("-y", "--hyps", help="candidate goals, one per line (the hidden goal is added)")
        parser.add_argument("--observability", type=float, default=1.0)
        parser.add_argument("--noise", type=int, default=0)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--out", required=True)

    def perform(self, args: argparse.Namespace) -> int:
        domain = parse_domain(read_text(args.domain))
        instance = parse_problem(read_text(args.problem), domain)
        real_goal = instance.goal
        goals = []
        if args.hyps:
            for line in read_text(args.hyps).splitlines():
                line = line.split(";", 1)[0].strip()
                if line:
                    goals.append(goal_of(parse_fact_list(line)))
        if real_goal not in goals:
            goals.append(real_goal)

        task = build_task(domain, instance, goals)
        plan = find_plan(task, instance.initial, real_goal)
        spec = ObservationSpec(args.observability, args.noise, args.seed)
        observations = observe(plan, spec, task)
        write_bundle(args.out, instance, goals, observations, real_goal)
        logger.info("Wrote %s: plan of %d, %d observations", args.out, len(plan), len(observations))
        return 0


class GenerateSuiteHandler(BaseCommandHandler):
    name = "gen-suite"
    help = "generate random problems for a bundled domain at several observability levels"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("-D", "--domain", required=True, choices=sorted(DOMAINS))
        parser.add_argument("-n", "--count", type=int, default=10)
        parser.add_argument("--observability", type=_float_list, default=[0.1, 0.3, 0.5, 0.7, 1.0])
        parser.add_argument("--noise", type=int, default=0)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--out", required=True)

    def perform(self, args: argparse.Namespace) -> int:
        write_suite(args.out, args.domain, args.count, args.observability, args.noise, args.seed)
        return 0


def write_suite(
    out: str, domain_name: str, count: int, levels: List[float], noise: int = 0, seed: int = 0
) -> List[DatasetBundle]:
    """Набор в раскладке <out>/<домен>/<процент>/<nnn>/.

Для одной задачи все уровни наблюдаемости используют один seed, поэтому
наблюдения меньшего уровня входят в наблюдения большего.
    """
    bundles = []
    for number in range(count):
        rng = random.Random(f"{seed}:{domain_name}:{number}")
        generated = generate_problem(domain_name, rng, name=f"{domain_name}-{number:03d}")
        for observability in levels:
            spec = ObservationSpec(observability, noise, seed=seed * 1000003 + number)
            observations = observe(generated.plan, spec, generated.task)
            directory = Path(out) / domain_name / f"{round(observability * 100)}" / f"{number:03d}"
            bundles.append(
                write_bundle(directory, generated.instance, generated.goals, observations, generated.real_goal)
            )
    return bundles


class LandmarksHandler(BaseCommandHandler):
    name = "landmarks"
    help = "print the landmark graph of a problem's goal"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("-d", "--domain", required=True)
        parser.add_argument("-p", "--problem", required=True)
        parser.add_argument("--json", action="store_true")
        parser.add_argument("--max-disjunction-size", type=int, default=MAX_DISJUNCTION_SIZE)

    def perform(self, args: argparse.Namespace) -> int:
        domain = parse_domain(read_text(args.domain))
        instance = parse_problem(read_text(args.problem), domain)
        task = build_task(domain, instance)
        graphs = extract_for_goals(
            task, instance.initial, [instance.goal], max_disjunction_size=args.max_disjunction_size
        )
        self.stdout.write(render_landmarks(graphs[instance.goal], as_json=args.json))
        return 0


COMMAND_HANDLERS: Dict[str, Type[BaseCommandHandler]] = {
    handler.name: handler
    for handler in (RecognizeHandler, EvaluateHandler, GenerateDatasetHandler, GenerateSuiteHandler, LandmarksHandler)
}


def handler_for(name: str, stdout: Optional[TextIO] = None) -> BaseCommandHandler:
    return COMMAND_HANDLERS[name](stdout or sys.stdout)
