import numpy as np
import pytest
from hypothesis import settings

from uqeval.data import EvaluationSet, PredictionRecord, validate_set

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def make_set(y_true, means, variances, ids=None):
    """Build an EvaluationSet from plain lists; 1-D members mean M=1."""
    y_true = np.asarray(y_true, dtype=float)
    ids = ids if ids is not None else [str(i) for i in range(len(y_true))]
    return EvaluationSet.from_arrays(ids, y_true, means, variances)


def from_errors(errors, variances):
    """Single-model set with prediction 0 and y_true = error."""
    errors = np.asarray(errors, dtype=float)
    return make_set(errors, np.zeros_like(errors), variances)


@pytest.fixture
def tiny_records():
    return [
        PredictionRecord("a", 0.0, ((0.0, 1.0), (2.0, 1.0))),
        PredictionRecord("b", 1.0, ((1.0, 0.5), (1.5, 2.0))),
        PredictionRecord("c", -1.0, ((0.0, 4.0), (-2.0, 1.0))),
    ]


@pytest.fixture
def tiny_set(tiny_records):
    return validate_set(tiny_records)


def pytest_terminal_summary(terminalreporter):
    rows = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                rows.append((props["criterion"], status, props.get("detail", "")))
    if rows:
        terminalreporter.section("acceptance criteria")
        for crit, status, detail in sorted(rows):
            mark = "PASS" if status == "passed" else "FAIL"
            terminalreporter.write_line(f"[{mark}] criterion {crit}: {detail}")
