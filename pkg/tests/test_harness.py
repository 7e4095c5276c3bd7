import time

import pytest

from dataset import HYPOTHESIS_TOKEN, load_bundle
from harness import REPORT_COLUMNS, MetricsReport, MetricsRow, deadline, evaluate, recognize_bundle, run_problem
import exceptions
import harness


def _row(method="gc", theta=0.0, correct=True, spread=1, goals=3, observability=1.0, domain="blocks"):
    return MetricsRow("b", domain, observability, goals, 2, method, theta, 0.25, correct, spread)


def test_run_problem(words_bundle):
    row, result = run_problem(words_bundle, "uniq")
    assert row.correct
    assert row.spread == 1
    assert row.fpr == 0.0
    assert (row.num_goals, row.num_observations, row.observability) == (3, 2, 1.0)
    assert row.domain == "blocks"
    assert row.time_s == result.time_s


def test_thetas_share_one_extraction(words_bundle):
    results = recognize_bundle(load_bundle(words_bundle), "gc", [0.0, 0.1, 1.0])
    assert [len(result.returned) for result in results] == [1, 1, 3]
    assert len({result.timings["extraction"] for result in results}) == 1


def test_unknown_method(words_bundle):
    with pytest.raises(exceptions.Impossible):
        recognize_bundle(load_bundle(words_bundle), "magic", [0.0])


def test_false_positive_rate():
    assert _row(correct=True, spread=3).fpr == 1.0
    assert _row(correct=False, spread=1).fpr == 0.5
    assert _row(goals=1).fpr == 0.0


def test_report_summaries():
    rows = [
        _row(correct=True, spread=1),
        _row(correct=False, spread=2),
        _row(method="uniq", correct=True, spread=1),
        _row(observability=0.3, correct=True, spread=1),
    ]
    report = MetricsReport(rows, [("broken", "boom")])
    assert report.accuracy == 0.75
    assert report.mean_spread == 1.25
    assert report.mean_time == 0.25
    groups = report.summary()
    keys = list(zip(groups["observability"], groups["method"]))
    assert keys == [(0.3, "gc"), (1.0, "gc"), (1.0, "uniq")]
    assert groups["accuracy"].tolist() == [1.0, 0.5, 1.0]
    assert groups["count"].tolist() == [1, 2, 1]
    roc = report.roc_points()
    assert list(roc.columns) == ["method", "theta", "fpr", "tpr"]
    assert roc.iloc[0]["fpr"] == pytest.approx(1 / 3)
    assert roc.iloc[0]["tpr"] == pytest.approx(2 / 3)


def test_report_frame_types():
    frame = MetricsReport([_row(), _row(correct=False)]).frame()
    assert list(frame.columns) == list(REPORT_COLUMNS)
    assert frame["correct"].dtype == bool
    assert frame["spread"].tolist() == [1, 1]


def test_empty_report():
    report = MetricsReport()
    assert report.accuracy == 0.0
    assert report.frame().empty
    assert report.summary().empty


def _copy_bundle(bundle, directory):
    directory.mkdir(parents=True)
    for path in bundle.directory.iterdir():
        (directory / path.name).write_bytes(path.read_bytes())
    return directory


def test_evaluate_collects_failures_and_keeps_going(tmp_path, words_bundle):
    broken = _copy_bundle(words_bundle, tmp_path / "blocks" / "100" / "001")
    template = broken / "template.pddl"
    template.write_text(template.read_text().replace(HYPOTHESIS_TOKEN, ""))

    report = evaluate(tmp_path, ["uniq", "gc"], [0.0, 0.2], timeout=None)
    order = [(row.method, row.theta) for row in report.rows]
    assert order == [("uniq", 0.0), ("uniq", 0.2), ("gc", 0.0), ("gc", 0.2)]
    assert all(row.bundle == str(words_bundle.directory) for row in report.rows)
    assert len(report.failures) == 1
    assert report.failures[0][0] == str(broken)


def test_undecodable_bundle_is_a_failure(tmp_path, words_bundle):
    broken = _copy_bundle(words_bundle, tmp_path / "blocks" / "100" / "001")
    (broken / "obs.dat").write_bytes(b"(unstack e a)\n\xff\xfe\n")
    report = evaluate(tmp_path, ["gc"], [0.0], timeout=None)
    assert len(report.rows) == 1
    assert len(report.failures) == 1
    bundle, error = report.failures[0]
    assert bundle == str(broken)
    assert "not UTF-8" in error


def test_unexpected_errors_fail_one_method(tmp_path, words_bundle, monkeypatch, caplog):
    original = harness.recognize_bundle

    def flaky(loaded, method, thetas, options=None):
        if method == "uniq":
            raise RuntimeError("scorer crashed")
        return original(loaded, method, thetas, options)

    monkeypatch.setattr(harness, "recognize_bundle", flaky)
    report = evaluate(tmp_path, ["gc", "uniq"], [0.0, 0.1], timeout=None)
    assert [(row.method, row.theta) for row in report.rows] == [("gc", 0.0), ("gc", 0.1)]
    assert report.failures == [(str(words_bundle.directory), "uniq: RuntimeError: scorer crashed")]
    assert "Unexpected RuntimeError" in caplog.text


def test_timeout_applies_to_each_method(tmp_path, words_bundle, monkeypatch):
    original = harness.recognize_bundle

    def slow_uniq(loaded, method, thetas, options=None):
        if method == "uniq":
            time.sleep(5)
        return original(loaded, method, thetas, options)

    monkeypatch.setattr(harness, "recognize_bundle", slow_uniq)
    report = evaluate(tmp_path, ["gc", "uniq", "filter"], [0.0], timeout=0.5)
    assert [row.method for row in report.rows] == ["gc", "filter"]
    assert len(report.failures) == 1
    assert report.failures[0][1].startswith("uniq: Problem exceeded")


def test_parallel_evaluation_matches_serial(tmp_path, words_bundle):
    serial = evaluate(tmp_path, ["gc", "filter"], [0.0], timeout=None)
    parallel = evaluate(tmp_path, ["gc", "filter"], [0.0], workers=2, timeout=None)
    # Время у процессов своё.
    assert [row.as_tuple()[:6] + row.as_tuple()[7:] for row in serial.rows] == [
        row.as_tuple()[:6] + row.as_tuple()[7:] for row in parallel.rows
    ]


def test_evaluate_needs_bundles(tmp_path):
    with pytest.raises(exceptions.BundleError):
        evaluate(tmp_path)


def test_deadline_interrupts_long_work():
    with pytest.raises(exceptions.ProblemTimeout):
        with deadline(0.05):
            time.sleep(2)


def test_deadline_can_be_disabled():
    with deadline(None):
        pass
    with deadline(0):
        pass
