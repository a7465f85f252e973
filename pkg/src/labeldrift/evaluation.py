"""Prequential (test-then-train) evaluation of a streaming multi-label model.

Every instance is first predicted, then scored, then shown to the drift
detector, and finally used for training. A drift signal resets the model so
it relearns the new concept; detectors clean up after themselves. Drift
positions are reported as 1-based sample ordinals.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .baselines import exact_match
from .metrics import (
    example_accuracy,
    example_f1,
    hamming_score,
    micro_f1,
    per_instance_accuracy,
    segment_series,
)

__all__ = ["StepTrace", "MetricReport", "prequential_run", "write_json_report",
           "write_segment_rows"]


class StepTrace(NamedTuple):
    """Per-step callback payload: 0-based index, arrays, and outcomes."""

    index: int
    prediction: np.ndarray
    truth: np.ndarray
    correct: int
    drift: bool


@dataclass(frozen=True)
class MetricReport:
    """Outcome of one prequential run."""

    example_accuracy: float
    hamming_score: float
    example_f1: float
    micro_f1: float
    segment_series: tuple
    drift_positions: tuple
    n_samples: int

    def metrics(self):
        return {
            "example_accuracy": self.example_accuracy,
            "hamming_score": self.hamming_score,
            "example_f1": self.example_f1,
            "micro_f1": self.micro_f1,
        }

    def to_dict(self):
        return {
            "metrics": self.metrics(),
            "segment_series": list(self.segment_series),
            "drift_positions": list(self.drift_positions),
            "n_samples": self.n_samples,
        }


def _detector_input_kind(detector):
    kind = getattr(detector, "consumes", None)
    if kind not in ("predicted_labels", "exact_match"):
        raise TypeError(
            "detector must declare consumes = 'predicted_labels' or 'exact_match', "
            f"got {kind!r} on {type(detector).__name__}")
    return kind


def prequential_run(instances, model, detector=None, segments=25,
                    on_step: Callable[[StepTrace], None] | None = None):
    """Run test-then-train over `instances` and return a MetricReport.

    Per instance: predict, score, update the detector (predicted labels for
    label-dependency detectors, the exact-match bit for error-rate ones),
    on drift record the 1-based position and reset the model, then train.
    Shape problems abort with the offending stream position in the message.
    """
    kind = _detector_input_kind(detector) if detector is not None else None
    predictions = []
    truths = []
    drift_positions = []
    for index, instance in enumerate(instances):
        try:
            prediction = model.predict(instance.features)
            correct = exact_match(prediction, instance.labels)
            drift = False
            if detector is not None:
                signal = detector.update(
                    prediction if kind == "predicted_labels" else correct)
                drift = signal.drift
                if drift:
                    drift_positions.append(index + 1)
                    model.reset()
            model.partial_fit(instance.features, instance.labels)
        except ValueError as err:
            raise ValueError(f"stream position {index}: {err}") from err
        predictions.append(prediction)
        truths.append(instance.labels)
        if on_step is not None:
            on_step(StepTrace(index, prediction, instance.labels, correct, drift))

    if not predictions:
        raise ValueError("the stream yielded no instances")
    predicted = np.asarray(predictions)
    truth = np.asarray(truths)
    return MetricReport(
        example_accuracy=example_accuracy(predicted, truth),
        hamming_score=hamming_score(predicted, truth),
        example_f1=example_f1(predicted, truth),
        micro_f1=micro_f1(predicted, truth),
        segment_series=tuple(
            float(v) for v in segment_series(per_instance_accuracy(predicted, truth), segments)),
        drift_positions=tuple(drift_positions),
        n_samples=predicted.shape[0],
    )


def _jsonable(value):
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(item) for item in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def write_json_report(path, payload):
    """Write a JSON report atomically; identical payloads give identical bytes."""
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
    _replace_into(path, text)


def write_segment_rows(path, series):
    """Write a segment series as 'segment,value' rows for plotting."""
    lines = ["segment,example_accuracy"]
    lines.extend(f"{k},{repr(float(v))}" for k, v in enumerate(series, start=1))
    _replace_into(path, "\n".join(lines) + "\n")


def _replace_into(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    descriptor, temp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(descriptor, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise
