"""Streaming behavior of the label-dependency drift detector."""

import numpy as np
import pytest

from labeldrift import LD3, LabelDependencyDriftDetector, sigma_anomaly_count
from labeldrift.rankfusion import cooccurrence_matrix

import oracles

SIX_SAMPLE_STREAM = [(0, 0, 1), (1, 1, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 0, 1)]

# a fixed, decisively-structured stationary concept over 8 labels: exact
# zero-count ties and well-separated positive counts keep every window's
# rankings identical, so the similarity stays at 1.0 until something changes
DECISIVE_SETS = np.zeros((4, 8), dtype=np.uint8)
DECISIVE_SETS[0, [0, 1]] = 1
DECISIVE_SETS[1, [0, 1, 2]] = 1
DECISIVE_SETS[2, [3, 4]] = 1
DECISIVE_SETS[3, [5]] = 1
DECISIVE_WEIGHTS = np.array([0.5, 0.25, 0.15, 0.10])
LABEL_PERMUTATION = np.array([3, 4, 5, 0, 1, 2, 7, 6])


def decisive_stream(n_samples, flip_at=None, seed=7):
    rng = np.random.default_rng(seed)
    rows = rng.choice(len(DECISIVE_SETS), size=n_samples, p=DECISIVE_WEIGHTS)
    out = []
    for index, row in enumerate(rows):
        vector = DECISIVE_SETS[row]
        if flip_at is not None and index >= flip_at:
            vector = vector[LABEL_PERMUTATION]
        out.append(vector)
    return out


def random_stream(n_samples, n_labels, seed):
    rng = np.random.default_rng(seed)
    return [rng.integers(0, 2, size=n_labels) for _ in range(n_samples)]


class TestSigmaAnomalyCount:
    def test_single_low_outlier(self):
        assert sigma_anomaly_count([1.0, 1.0, 1.0, 1.0, 0.0], 1.0) == 1

    def test_constant_window_has_no_outliers(self):
        assert sigma_anomaly_count([0.5] * 40, 4.0) == 0

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(19)
        for _ in range(50):
            values = rng.normal(size=int(rng.integers(1, 200))).tolist()
            multiplier = float(rng.uniform(0.5, 4.0))
            assert sigma_anomaly_count(values, multiplier) == \
                oracles.sigma_rule_reference(values, multiplier)

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError):
            sigma_anomaly_count([], 2.0)

    def test_non_positive_multiplier_rejected(self):
        with pytest.raises(ValueError):
            sigma_anomaly_count([1.0, 2.0], 0.0)


class TestWarmUp:
    def test_six_sample_fixture_first_similarity_at_two_w(self):
        detector = LD3(window_size=3)
        signals = [detector.update(vector) for vector in SIX_SAMPLE_STREAM]
        assert all(signal.correlation is None for signal in signals[:5])
        assert all(signal.drift is False for signal in signals)
        assert signals[5].correlation == pytest.approx(-1.0 / 6.0, abs=1e-6)
        assert signals[5].anomaly_count is None  # similarity window not yet full

    @pytest.mark.parametrize("window_size", [3, 10, 40])
    def test_no_similarity_before_both_windows_full(self, window_size):
        detector = LD3(window_size=window_size)
        for step, vector in enumerate(random_stream(3 * window_size, 5, seed=window_size), 1):
            signal = detector.update(vector)
            if step < 2 * window_size:
                assert signal.correlation is None
            else:
                assert signal.correlation is not None

    @pytest.mark.parametrize("window_size", [3, 10, 40])
    def test_no_drift_before_corr_window_full(self, window_size):
        # the third window fills at update 3w - 1, so nothing can fire earlier
        detector = LD3(window_size=window_size, sigma_multiplier=0.1)
        for step, vector in enumerate(
                random_stream(3 * window_size - 2, 6, seed=window_size + 1), 1):
            signal = detector.update(vector)
            assert signal.drift is False
            assert signal.anomaly_count is None

    def test_anomaly_count_present_once_corr_window_full(self):
        w = 4
        detector = LD3(window_size=w)
        signals = [detector.update(v) for v in random_stream(3 * w + 5, 4, seed=2)]
        for step, signal in enumerate(signals, 1):
            if step >= 3 * w - 1 and not signal.drift:
                assert signal.anomaly_count is not None
            if step < 3 * w - 1:
                assert signal.anomaly_count is None


class TestDriftMechanics:
    def test_permutation_change_fires_exactly_once_in_band(self):
        stream = decisive_stream(8000, flip_at=4000)
        detector = LD3(window_size=500)
        drifts = [step for step, vector in enumerate(stream, 1)
                  if detector.update(vector).drift]
        assert drifts == [4003]
        assert 4000 < drifts[0] <= 4000 + 3 * 500

    def test_permutation_change_matches_replay_oracle(self):
        stream = decisive_stream(8000, flip_at=4000)
        detector = LD3(window_size=500)
        drifts = [step for step, vector in enumerate(stream, 1)
                  if detector.update(vector).drift]
        assert drifts == oracles.ld3_replay(stream, 500, 4.0, 0)

    def test_stationary_stream_false_alarms_bounded(self):
        # seed-fixed bound established by the replay oracle on this stream
        stream = decisive_stream(2500, flip_at=None, seed=11)
        detector = LD3(window_size=50)
        drifts = [step for step, vector in enumerate(stream, 1)
                  if detector.update(vector).drift]
        assert drifts == oracles.ld3_replay(stream, 50, 4.0, 0)
        assert len(drifts) == 0

    def test_windows_clear_after_drift(self):
        w = 50
        stream = decisive_stream(400, flip_at=250, seed=13)
        detector = LD3(window_size=w, sigma_multiplier=1.0)
        drift_step = None
        for step, vector in enumerate(stream, 1):
            if detector.update(vector).drift:
                drift_step = step
                break
        assert drift_step is not None
        # post-clear warm-up: no similarity for 2w - 1 updates, none of them drifts
        followup = [detector.update(v) for v in decisive_stream(2 * w, seed=14)]
        assert all(signal.correlation is None for signal in followup[:2 * w - 1])
        assert all(signal.drift is False for signal in followup)

    def test_internal_counts_match_recomputed_windows(self):
        detector = LD3(window_size=6)
        stream = random_stream(40, 5, seed=21)
        for step, vector in enumerate(stream, 1):
            detector.update(vector)
            assert np.array_equal(
                detector._counts_new,
                cooccurrence_matrix(list(detector._new_window), n_labels=5))
            assert np.array_equal(
                detector._counts_old,
                cooccurrence_matrix(list(detector._old_window), n_labels=5))


class TestStateAndConfig:
    def test_deterministic_across_instances(self):
        stream = random_stream(200, 4, seed=29)
        first = LD3(window_size=10)
        second = LD3(window_size=10)
        for vector in stream:
            assert first.update(vector) == second.update(vector)

    def test_reset_behaves_like_fresh_detector(self):
        stream = random_stream(120, 4, seed=31)
        used = LD3(window_size=8)
        for vector in stream:
            used.update(vector)
        used.reset()
        fresh = LD3(window_size=8)
        for vector in stream:
            assert used.update(vector) == fresh.update(vector)

    def test_reset_is_idempotent(self):
        detector = LD3(window_size=5)
        detector.reset()
        detector.reset()
        assert detector.update([0, 1, 0]).drift is False

    def test_failed_update_leaves_state_unchanged(self):
        stream = random_stream(60, 4, seed=37)
        detector = LD3(window_size=6)
        shadow = LD3(window_size=6)
        for step, vector in enumerate(stream):
            if step == 20:
                with pytest.raises(ValueError):
                    detector.update([0, 1])      # wrong width
                with pytest.raises(ValueError):
                    detector.update([0, 1, 2, 0])  # non-binary
            assert detector.update(vector) == shadow.update(vector)

    def test_label_width_locked_by_first_update(self):
        detector = LD3(window_size=4)
        detector.update([0, 1, 1])
        with pytest.raises(ValueError):
            detector.update([0, 1])

    @pytest.mark.parametrize("kwargs", [
        {"window_size": 1},
        {"window_size": 2.5},
        {"sigma_multiplier": 0.0},
        {"sigma_multiplier": -1.0},
        {"anomaly_threshold": -1},
        {"fusion": "median"},
    ])
    def test_bad_configuration_rejected(self, kwargs):
        detector = LabelDependencyDriftDetector(**kwargs)
        with pytest.raises(ValueError):
            detector.update([0, 1])

    def test_single_label_vectors_rejected(self):
        detector = LD3(window_size=3)
        with pytest.raises(ValueError):
            detector.update([1])

    def test_get_params_round_trip(self):
        detector = LD3(window_size=7, sigma_multiplier=2.0, anomaly_threshold=1,
                       fusion="borda")
        params = detector.get_params()
        assert params == {"window_size": 7, "sigma_multiplier": 2.0,
                          "anomaly_threshold": 1, "fusion": "borda"}

    @pytest.mark.parametrize("fusion", ["reciprocal", "borda", "condorcet", "mc4"])
    def test_all_fusion_methods_run_end_to_end(self, fusion):
        detector = LD3(window_size=4, fusion=fusion)
        for vector in random_stream(20, 4, seed=41):
            signal = detector.update(vector)
        assert signal.correlation is not None
