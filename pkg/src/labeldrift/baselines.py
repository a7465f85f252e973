"""Supervised error-rate drift detectors used as baselines, plus exact match.

Both detectors consume a stream of exact-match bits (1 when the full
predicted label vector equals the truth) and therefore need ground-truth
labels, unlike the label-dependency detector.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_binary_flag, check_label_vector
from .detector import DriftSignal

__all__ = ["exact_match", "DDM", "EDDM"]


def exact_match(predicted, truth):
    """1 when the predicted binary label vector equals the truth, else 0."""
    p = check_label_vector(predicted, name="predicted")
    t = check_label_vector(truth, n_labels=p.shape[0], name="truth")
    return int(np.array_equal(p, t))


class DDM(BaseEstimator):
    """Drift detection from a rising classification error rate.

    Tracks the running error rate p and its binomial standard deviation s,
    remembers the minimum of p + s, and flags a warning (drift) when p + s
    exceeds that minimum by more than `warning_level` (`drift_level`) times
    the remembered standard deviation. No decisions are made before
    `min_samples` updates, and a drift fully resets the detector.

    Parameters
    ----------
    min_samples : int, default=30
    warning_level : float, default=2.0
    drift_level : float, default=3.0
    """

    consumes = "exact_match"

    def __init__(self, min_samples=30, warning_level=2.0, drift_level=3.0):
        self.min_samples = min_samples
        self.warning_level = warning_level
        self.drift_level = drift_level
        self.reset()

    def reset(self):
        self.phase = "stable"
        self._seen = 0
        self._error_rate = 0.0
        self._deviation = 0.0
        self._rate_min = math.inf
        self._deviation_min = math.inf

    def update(self, correct):
        """Consume one exact-match bit (1 = correct), return a DriftSignal."""
        error = 1 - check_binary_flag(correct, name="correct")
        self._seen += 1
        self._error_rate += (error - self._error_rate) / self._seen
        self._deviation = math.sqrt(
            self._error_rate * (1.0 - self._error_rate) / self._seen)
        if self._seen < self.min_samples:
            self.phase = "stable"
            return DriftSignal(drift=False)

        level = self._error_rate + self._deviation
        if level <= self._rate_min + self._deviation_min:
            self._rate_min = self._error_rate
            self._deviation_min = self._deviation

        if level > self._rate_min + self.drift_level * self._deviation_min:
            self.reset()
            self.phase = "drift"
            return DriftSignal(drift=True)
        if level > self._rate_min + self.warning_level * self._deviation_min:
            self.phase = "warning"
        else:
            self.phase = "stable"
        return DriftSignal(drift=False)


class EDDM(BaseEstimator):
    """Drift detection from shrinking distances between classification errors.

    Maintains the running mean and (population) standard deviation of the
    gaps between consecutive errors and tracks the maximum of
    mean + 2 * std. Once `min_errors` errors have been observed, the ratio
    of the current value to that maximum below `warning_ratio`
    (`drift_ratio`) flags a warning (drift). A drift fully resets the
    detector. The first error only initializes the error position and
    produces no gap.

    Parameters
    ----------
    min_errors : int, default=30
    warning_ratio : float, default=0.95
    drift_ratio : float, default=0.90
    """

    consumes = "exact_match"

    def __init__(self, min_errors=30, warning_ratio=0.95, drift_ratio=0.90):
        self.min_errors = min_errors
        self.warning_ratio = warning_ratio
        self.drift_ratio = drift_ratio
        self.reset()

    def reset(self):
        self.phase = "stable"
        self._seen = 0
        self._errors = 0
        self._last_error_at = 0
        self._gap_count = 0
        self._gap_mean = 0.0
        self._gap_m2 = 0.0
        self._level_max = -math.inf

    def update(self, correct):
        """Consume one exact-match bit (1 = correct), return a DriftSignal."""
        flag = check_binary_flag(correct, name="correct")
        position = self._seen
        self._seen += 1
        if flag:
            return DriftSignal(drift=False)

        self._errors += 1
        if self._errors == 1:
            self._last_error_at = position
            return DriftSignal(drift=False)

        gap = position - self._last_error_at
        self._last_error_at = position
        self._gap_count += 1
        delta = gap - self._gap_mean
        self._gap_mean += delta / self._gap_count
        self._gap_m2 += delta * (gap - self._gap_mean)
        std = math.sqrt(self._gap_m2 / self._gap_count)
        level = self._gap_mean + 2.0 * std

        if level > self._level_max:
            self._level_max = level
            self.phase = "stable"
            return DriftSignal(drift=False)
        if self._errors < self.min_errors:
            self.phase = "stable"
            return DriftSignal(drift=False)

        ratio = level / self._level_max
        if ratio < self.drift_ratio:
            self.reset()
            self.phase = "drift"
            return DriftSignal(drift=True)
        if ratio < self.warning_ratio:
            self.phase = "warning"
        else:
            self.phase = "stable"
        return DriftSignal(drift=False)
