"""Unsupervised drift detection from shifts in label-dependency structure.

The detector watches a stream of (predicted) binary label vectors and keeps
two consecutive sliding windows of them. Each step, once both windows are
full, it fuses per-label co-occurrence rankings from each window into two
global label rankings and records their similarity. Drift is signalled when
the similarity history contains more low outliers than allowed.
No ground-truth labels are involved at any point.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_label_vector
from .rankfusion import FUSION_METHODS, local_rankings, ws_coefficient

__all__ = ["DriftSignal", "sigma_anomaly_count", "LabelDependencyDriftDetector", "LD3"]


@dataclass(frozen=True)
class DriftSignal:
    """Outcome of one detector update.

    Attributes
    ----------
    drift : bool
        True when the update signalled concept drift.
    correlation : float or None
        The rank-similarity value computed this step, present only when both
        label windows were full (LD3); None for error-rate detectors.
    anomaly_count : int or None
        Number of low outliers in the similarity window, present only when
        that window was full this step (LD3); None otherwise.
    """

    drift: bool
    correlation: float | None = None
    anomaly_count: int | None = None


def sigma_anomaly_count(values, multiplier):
    """Count entries lying strictly below mean - multiplier * std.

    Mean and standard deviation are the population statistics of `values`
    itself. A zero-variance window therefore has no outliers.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("values must be a non-empty 1-D sequence")
    if multiplier <= 0:
        raise ValueError(f"multiplier must be positive, got {multiplier}")
    mean = arr.mean()
    std = arr.std()
    return int((arr < mean - multiplier * std).sum())


class LabelDependencyDriftDetector(BaseEstimator):
    """Detect concept drift in a multi-label stream from predicted labels only.

    Parameters
    ----------
    window_size : int, default=500
        Capacity w of each internal window. The newest w label vectors and
        the w before them are summarized into co-occurrence rankings; the
        last w similarity values form the outlier window. 500 suits
        high-rate streams, 50 is a better fit for short ones.
    sigma_multiplier : float, default=4.0
        How many standard deviations below the mean a similarity value must
        fall to count as an outlier.
    anomaly_threshold : int, default=0
        Drift is signalled when the outlier count strictly exceeds this.
    fusion : str, default="reciprocal"
        Rank-fusion method used to build the global label rankings; one of
        "reciprocal", "borda", "condorcet", "mc4".

    Notes
    -----
    The first similarity value appears at update 2w and the outlier window
    fills at update 3w - 1, so no drift can be signalled earlier. On drift
    all three windows are cleared and the warm-up starts over.

    Examples
    --------
    >>> det = LabelDependencyDriftDetector(window_size=3)
    >>> for vec in stream:                      # doctest: +SKIP
    ...     if det.update(vec).drift:
    ...         print("drift")
    """

    consumes = "predicted_labels"

    def __init__(self, window_size=500, sigma_multiplier=4.0, anomaly_threshold=0,
                 fusion="reciprocal"):
        self.window_size = window_size
        self.sigma_multiplier = sigma_multiplier
        self.anomaly_threshold = anomaly_threshold
        self.fusion = fusion
        self.reset()

    def _check_config(self):
        w = self.window_size
        if not isinstance(w, (int, np.integer)) or w < 2:
            raise ValueError(f"window_size must be an integer >= 2, got {w!r}")
        if not self.sigma_multiplier > 0:
            raise ValueError(
                f"sigma_multiplier must be positive, got {self.sigma_multiplier!r}")
        t = self.anomaly_threshold
        if not isinstance(t, (int, np.integer)) or t < 0:
            raise ValueError(f"anomaly_threshold must be an integer >= 0, got {t!r}")
        if self.fusion not in FUSION_METHODS:
            known = ", ".join(sorted(FUSION_METHODS))
            raise ValueError(f"unknown fusion method {self.fusion!r}; expected one of {known}")

    def reset(self):
        """Return to the freshly-constructed state (label width unbound)."""
        self._n_labels = None
        self._new_window = deque()
        self._old_window = deque()
        self._corr_window = None
        self._counts_new = None
        self._counts_old = None

    def _clear_windows(self):
        # post-drift clear: windows and matrices empty, label width stays bound
        self._new_window.clear()
        self._old_window.clear()
        self._corr_window.clear()
        self._counts_new.fill(0)
        self._counts_old.fill(0)

    @staticmethod
    def _pair_counts(vector):
        outer = np.outer(vector.astype(np.int64), vector)
        np.fill_diagonal(outer, 0)
        return outer

    def update(self, labels):
        """Consume one predicted label vector, return the step's DriftSignal.

        Raises ValueError (leaving the state untouched) when the vector is
        not binary or its length disagrees with earlier updates.
        """
        self._check_config()
        vec = check_label_vector(labels, n_labels=self._n_labels)
        if self._n_labels is None:
            if vec.shape[0] < 2:
                raise ValueError("label vectors need at least 2 labels")
            self._n_labels = vec.shape[0]
            self._corr_window = deque(maxlen=self.window_size)
            self._counts_new = np.zeros((self._n_labels, self._n_labels), dtype=np.int64)
            self._counts_old = np.zeros_like(self._counts_new)

        w = self.window_size
        self._new_window.append(vec)
        self._counts_new += self._pair_counts(vec)
        if len(self._new_window) > w:
            evicted = self._new_window.popleft()
            shed = self._pair_counts(evicted)
            self._counts_new -= shed
            self._old_window.append(evicted)
            self._counts_old += shed
            if len(self._old_window) > w:
                gone = self._old_window.popleft()
                self._counts_old -= self._pair_counts(gone)

        if len(self._new_window) < w or len(self._old_window) < w:
            return DriftSignal(drift=False)

        fuse = FUSION_METHODS[self.fusion]
        ranking_new = fuse(local_rankings(self._counts_new))
        ranking_old = fuse(local_rankings(self._counts_old))
        corr = ws_coefficient(ranking_new, ranking_old)
        self._corr_window.append(corr)
        if len(self._corr_window) < w:
            return DriftSignal(drift=False, correlation=corr)

        count = sigma_anomaly_count(self._corr_window, self.sigma_multiplier)
        drift = count > self.anomaly_threshold
        if drift:
            self._clear_windows()
        return DriftSignal(drift=drift, correlation=corr, anomaly_count=count)


LD3 = LabelDependencyDriftDetector
