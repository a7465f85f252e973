"""Prequential evaluation loop wiring and report serialization."""

import json

import numpy as np
import pytest

from labeldrift import (
    DDM,
    LD3,
    DriftSignal,
    DriftStreamSpec,
    IncrementalClassifierChain,
    generate_synthetic,
    prequential_run,
    write_json_report,
    write_segment_rows,
)
from labeldrift.evaluation import StepTrace


def small_stream(n_samples=300, seed=2):
    spec = DriftStreamSpec(n_samples=n_samples, n_features=4, n_labels=6,
                           drift_positions=(n_samples // 2,), drift_widths=(1,),
                           kind="sudden", seed=seed, labelsets_per_concept=5)
    return list(generate_synthetic(spec))


def small_model():
    return IncrementalClassifierChain(n_labels=6, n_features=4)


class RecordingDetector:
    """Stores every vector it is shown; never signals drift."""

    consumes = "predicted_labels"

    def __init__(self):
        self.seen = []

    def update(self, labels):
        self.seen.append(np.asarray(labels).copy())
        return DriftSignal(drift=False)

    def reset(self):
        self.seen.clear()


class ScriptedDetector:
    """Fires drift at fixed 1-based positions."""

    consumes = "exact_match"

    def __init__(self, fire_at):
        self.fire_at = set(fire_at)
        self._step = 0

    def update(self, correct):
        self._step += 1
        return DriftSignal(drift=self._step in self.fire_at)

    def reset(self):
        self._step = 0


class ResetSpyModel:
    """Minimal model that logs when it is reset; always predicts zeros."""

    def __init__(self, n_labels):
        self.n_labels = n_labels
        self.reset_at = []
        self._fitted = 0

    def predict(self, features):
        return np.zeros(self.n_labels, dtype=np.uint8)

    def partial_fit(self, features, labels):
        self._fitted += 1

    def reset(self):
        self.reset_at.append(self._fitted)


class TestLoopWiring:
    def test_detector_sees_exactly_the_models_predictions(self):
        stream = small_stream()
        recorder = RecordingDetector()
        report = prequential_run(stream, small_model(), recorder)
        assert len(recorder.seen) == len(stream)
        replay_model = small_model()
        for step, instance in enumerate(stream):
            expected = replay_model.predict(instance.features)
            assert np.array_equal(recorder.seen[step], expected)
            replay_model.partial_fit(instance.features, instance.labels)
        assert report.n_samples == len(stream)

    def test_error_rate_detector_gets_exact_match_bits(self):
        bits = []

        class BitRecorder:
            consumes = "exact_match"

            def update(self, correct):
                bits.append(correct)
                return DriftSignal(drift=False)

            def reset(self):
                pass

        stream = small_stream()
        prequential_run(stream, small_model(), BitRecorder())
        assert len(bits) == len(stream)
        assert set(bits) <= {0, 1}

    def test_no_detector_is_deterministic(self):
        stream = small_stream()
        first = prequential_run(stream, small_model())
        second = prequential_run(stream, small_model())
        assert first == second
        assert first.drift_positions == ()

    def test_scripted_drift_position_is_one_based(self):
        stream = small_stream(n_samples=60)
        report = prequential_run(stream, small_model(), ScriptedDetector({10, 25}))
        assert report.drift_positions == (10, 25)

    def test_drift_resets_the_model(self):
        stream = small_stream(n_samples=40)
        spy = ResetSpyModel(n_labels=6)
        prequential_run(stream, spy, ScriptedDetector({15}))
        # reset happens after 14 training steps, before the 15th
        assert spy.reset_at == [14]

    def test_real_detector_round_trip(self):
        stream = small_stream(n_samples=400, seed=6)
        report = prequential_run(stream, small_model(), DDM())
        assert 0.0 <= report.example_accuracy <= 1.0
        assert all(1 <= p <= 400 for p in report.drift_positions)

    def test_on_step_receives_full_trace(self):
        stream = small_stream(n_samples=30)
        traces = []
        prequential_run(stream, small_model(), None, on_step=traces.append)
        assert len(traces) == 30
        first = traces[0]
        assert isinstance(first, StepTrace)
        assert first.index == 0
        assert first.prediction.shape == (6,)
        assert first.correct in (0, 1)
        assert first.drift is False

    def test_segments_parameter_controls_series_length(self):
        stream = small_stream(n_samples=100)
        report = prequential_run(stream, small_model(), segments=10)
        assert len(report.segment_series) == 10

    def test_empty_stream_rejected(self):
        with pytest.raises(ValueError):
            prequential_run([], small_model())

    def test_shape_error_carries_stream_position(self):
        stream = small_stream(n_samples=20)
        from labeldrift import Instance
        stream[7] = Instance(features=np.zeros(3), labels=stream[7].labels)
        with pytest.raises(ValueError, match="stream position 7"):
            prequential_run(stream, small_model())

    def test_detector_without_consumes_rejected(self):
        class Mystery:
            def update(self, value):
                return DriftSignal(drift=False)

        with pytest.raises(TypeError):
            prequential_run(small_stream(n_samples=5), small_model(), Mystery())

    def test_ld3_in_the_loop_smoke(self):
        stream = small_stream(n_samples=250, seed=8)
        report = prequential_run(stream, small_model(), LD3(window_size=30))
        assert report.n_samples == 250


class TestReportOutput:
    def test_to_dict_structure(self):
        report = prequential_run(small_stream(n_samples=50), small_model(),
                                 ScriptedDetector({20}))
        payload = report.to_dict()
        assert payload["n_samples"] == 50
        assert payload["drift_positions"] == [20]
        assert set(payload["metrics"]) == {
            "example_accuracy", "hamming_score", "example_f1", "micro_f1"}

    def test_json_report_round_trip(self, tmp_path):
        report = prequential_run(small_stream(n_samples=50), small_model())
        path = tmp_path / "report.json"
        write_json_report(path, report.to_dict())
        loaded = json.loads(path.read_text())
        assert loaded == report.to_dict()

    def test_json_report_bytes_are_deterministic(self, tmp_path):
        payload = {"b": [1.5, 2], "a": {"nested": np.float64(0.25)}}
        first = tmp_path / "one.json"
        second = tmp_path / "two.json"
        write_json_report(first, payload)
        write_json_report(second, payload)
        assert first.read_bytes() == second.read_bytes()

    def test_json_report_converts_numpy_scalars(self, tmp_path):
        path = tmp_path / "np.json"
        write_json_report(path, {"x": np.int64(3), "y": np.arange(2)})
        assert json.loads(path.read_text()) == {"x": 3, "y": [0, 1]}

    def test_json_report_overwrites_atomically(self, tmp_path):
        path = tmp_path / "report.json"
        write_json_report(path, {"v": 1})
        write_json_report(path, {"v": 2})
        assert json.loads(path.read_text()) == {"v": 2}
        assert list(tmp_path.iterdir()) == [path]  # no stray temp files

    def test_segment_rows_format(self, tmp_path):
        path = tmp_path / "segments.csv"
        write_segment_rows(path, [0.5, 0.25])
        assert path.read_text() == "segment,example_accuracy\n1,0.5\n2,0.25\n"
