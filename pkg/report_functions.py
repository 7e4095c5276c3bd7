from __future__ import annotations

from typing import TYPE_CHECKING, List, TextIO
import json

import pandas as pd

from facts import format_goal
from harness import GROUP_KEYS, MetricsReport

if TYPE_CHECKING:
    from landmarks import LandmarkGraph
    from recognition import RecognitionResult


def _records(table: pd.DataFrame) -> List[dict]:
    return json.loads(table.round(3).to_json(orient="records"))


def emit_report(report: MetricsReport, stream: TextIO, format: str = "csv") -> None:
    """Записать отчёт в `stream`: CSV с заголовком или JSON со строками и сводкой.

Дробные числа: три знака после точки, порядок столбцов постоянен.
    """
    table = report.frame()
    if format == "csv":
        table["correct"] = table["correct"].map({True: "true", False: "false"})
        table.to_csv(stream, index=False, float_format="%.3f", lineterminator="\n")
    elif format == "json":
        document = {
            "rows": _records(table),
            "aggregates": {
                "accuracy": round(report.accuracy, 3),
                "spread": round(report.mean_spread, 3),
                "time_s": round(report.mean_time, 3),
                "failures": len(report.failures),
                "groups": _records(report.summary(GROUP_KEYS)),
                "roc": _records(report.roc_points()),
            },
        }
        json.dump(document, stream, indent=2)
        stream.write("\n")
    else:
        raise ValueError(f"Unknown report format {format}.")


def render_bar(value: float, total_width: int = 20) -> str:
    bar_width = int(value * total_width)
    return "[" + "#" * bar_width + "." * (total_width - bar_width) + "]"


def render_result(result: RecognitionResult) -> str:
    """Текстовая таблица оценок: возвращённые цели помечены звёздочкой."""
    lines = [f"Method: {result.method}  theta: {result.theta:.3f}  time: {result.time_s:.3f} s"]
    for goal in result.ranked:
        marker = "*" if goal in result.returned else " "
        score = result.scores[goal]
        line = f"{marker} {score:.3f} {render_bar(score)} {format_goal(goal)}"
        if goal in result.eliminated:
            line += f"  [eliminated: {result.eliminated[goal]}]"
        lines.append(line)
    lines.extend(f"! {message}" for message in result.report)
    return "\n".join(lines) + "\n"


def render_landmarks(graph: LandmarkGraph, as_json: bool = False) -> str:
    if as_json:
        return graph.to_json() + "\n"
    return graph.to_listing()
