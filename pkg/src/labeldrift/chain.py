"""A streaming classifier chain of incremental Gaussian naive Bayes links.

Link j predicts label j from the feature vector extended with the j
previous labels: true labels while training, already-predicted bits while
predicting. Every link keeps running per-class feature statistics, so the
model trains and predicts one instance at a time without storing the
stream.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_feature_vector, check_label_vector

__all__ = ["IncrementalClassifierChain"]

_LOG_2PI = math.log(2.0 * math.pi)


class IncrementalClassifierChain(BaseEstimator):
    """Multi-label classifier chain trained one instance at a time.

    Parameters
    ----------
    n_labels : int
        Number of binary labels; also the number of chain links. Link j
        (natural order 0..n_labels-1) sees n_features + j inputs.
    n_features : int
        Length of the numeric feature vectors.
    variance_floor_scale : float, default=1e-9
        Per-link variance floor, expressed as a fraction of the largest
        per-feature variance the link has observed (or 1.0 when it has
        observed none). Keeps Gaussian likelihoods finite on constant
        features.

    Notes
    -----
    Class priors are add-one smoothed. A link that has seen only one class
    predicts that class; a link that has seen nothing predicts 0, and exact
    likelihood ties resolve to 0. `reset` drops all learned statistics but
    keeps the configured shape.
    """

    def __init__(self, n_labels, n_features, variance_floor_scale=1e-9):
        self.n_labels = n_labels
        self.n_features = n_features
        self.variance_floor_scale = variance_floor_scale
        self.reset()

    def _check_config(self):
        if not isinstance(self.n_labels, (int, np.integer)) or self.n_labels < 1:
            raise ValueError(f"n_labels must be a positive integer, got {self.n_labels!r}")
        if not isinstance(self.n_features, (int, np.integer)) or self.n_features < 1:
            raise ValueError(f"n_features must be a positive integer, got {self.n_features!r}")
        if not self.variance_floor_scale > 0:
            raise ValueError(
                f"variance_floor_scale must be positive, got {self.variance_floor_scale!r}")

    def reset(self):
        """Forget everything learned; the chain shape stays as configured."""
        self._check_config()
        n, d = self.n_labels, self.n_features
        width = d + n  # link j only ever reads its first d + j columns
        self.class_counts_ = np.zeros((n, 2), dtype=np.float64)
        self.feature_means_ = np.zeros((n, 2, width), dtype=np.float64)
        self.feature_m2_ = np.zeros((n, 2, width), dtype=np.float64)

    def link_state(self, link):
        """Return (class_counts, means, m2) of one link, trimmed to its inputs."""
        width = self.n_features + link
        return (
            self.class_counts_[link].copy(),
            self.feature_means_[link, :, :width].copy(),
            self.feature_m2_[link, :, :width].copy(),
        )

    def _fit_one(self, x, y):
        z = np.concatenate([x, y.astype(np.float64)])
        cls = y.astype(np.int64)
        links = np.arange(self.n_labels)
        self.class_counts_[links, cls] += 1.0
        count = self.class_counts_[links, cls][:, None]
        # Welford, run per link on the padded input row; columns beyond a
        # link's width accumulate garbage that predict never reads.
        delta = z[None, :] - self.feature_means_[links, cls]
        self.feature_means_[links, cls] += delta / count
        self.feature_m2_[links, cls] += delta * (z[None, :] - self.feature_means_[links, cls])

    def _predict_one(self, x):
        n, d = self.n_labels, self.n_features
        z = np.zeros(d + n, dtype=np.float64)
        z[:d] = x
        bits = np.zeros(n, dtype=np.uint8)
        for j in range(n):
            width = d + j
            count0, count1 = self.class_counts_[j]
            if count1 == 0.0:
                bit = 0  # nothing seen, or only class 0
            elif count0 == 0.0:
                bit = 1
            else:
                counts = self.class_counts_[j][:, None]
                variances = self.feature_m2_[j, :, :width] / counts
                peak = variances.max()
                floor = self.variance_floor_scale * (peak if peak > 0.0 else 1.0)
                variances = np.maximum(variances, floor)
                diff = z[:width] - self.feature_means_[j, :, :width]
                log_priors = np.log((self.class_counts_[j] + 1.0) / (count0 + count1 + 2.0))
                log_joint = log_priors - 0.5 * (
                    _LOG_2PI * width
                    + np.log(variances).sum(axis=1)
                    + (diff * diff / variances).sum(axis=1)
                )
                bit = 1 if log_joint[1] > log_joint[0] else 0
            bits[j] = bit
            z[width] = bit
        return bits

    def partial_fit(self, X, Y):
        """Learn from one instance (1-D x, y) or a batch (2-D rows)."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            x = check_feature_vector(X, self.n_features)
            y = check_label_vector(Y, self.n_labels)
            self._fit_one(x, y)
            return self
        Y = np.asarray(Y)
        if X.ndim != 2 or Y.ndim != 2 or X.shape[0] != Y.shape[0]:
            raise ValueError("X and Y must be matching 1-D instances or 2-D batches")
        for row_x, row_y in zip(X, Y):
            self._fit_one(check_feature_vector(row_x, self.n_features),
                          check_label_vector(row_y, self.n_labels))
        return self

    def predict(self, X):
        """Predict the label vector of one instance, or one per batch row."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            return self._predict_one(check_feature_vector(X, self.n_features))
        if X.ndim != 2:
            raise ValueError(f"X must be 1-D or 2-D, got shape {X.shape}")
        return np.stack([
            self._predict_one(check_feature_vector(row, self.n_features)) for row in X
        ])
