"""Multi-label evaluation metrics and rank statistics for detector comparison."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_label_matrix

__all__ = [
    "example_accuracy",
    "per_instance_accuracy",
    "hamming_score",
    "example_f1",
    "micro_f1",
    "segment_series",
    "tied_average_ranks",
    "RankTable",
    "average_ranks",
    "nemenyi_critical_distance",
]


def _paired(predicted, truth):
    p = check_label_matrix(predicted, name="predicted")
    t = check_label_matrix(truth, n_labels=p.shape[1] if p.size else None, name="truth")
    if p.shape != t.shape:
        raise ValueError(f"prediction shape {p.shape} does not match truth shape {t.shape}")
    if p.shape[0] == 0:
        raise ValueError("need at least one instance")
    return p.astype(bool), t.astype(bool)


def per_instance_accuracy(predicted, truth):
    """Jaccard overlap |Y & Yhat| / |Y | Yhat| per instance; empty/empty is 1."""
    p, t = _paired(predicted, truth)
    intersection = (p & t).sum(axis=1)
    union = (p | t).sum(axis=1)
    return np.where(union == 0, 1.0, intersection / np.maximum(union, 1))


def example_accuracy(predicted, truth):
    """Mean per-instance Jaccard overlap between prediction and truth."""
    return float(per_instance_accuracy(predicted, truth).mean())


def hamming_score(predicted, truth):
    """Mean fraction of agreeing label bits (complement of the Hamming loss)."""
    p, t = _paired(predicted, truth)
    return float((p == t).sum(axis=1).mean() / p.shape[1])


def example_f1(predicted, truth):
    """Harmonic mean of example-based precision and recall.

    Per instance, precision (recall) with an empty denominator is 1 when the
    other side is empty too, else 0; a zero precision + recall sum gives 0.
    """
    p, t = _paired(predicted, truth)
    intersection = (p & t).sum(axis=1).astype(np.float64)
    predicted_size = p.sum(axis=1)
    truth_size = t.sum(axis=1)
    both_empty = (predicted_size == 0) & (truth_size == 0)
    precision = np.where(predicted_size > 0,
                         intersection / np.maximum(predicted_size, 1),
                         both_empty.astype(np.float64))
    recall = np.where(truth_size > 0,
                      intersection / np.maximum(truth_size, 1),
                      both_empty.astype(np.float64))
    mean_precision = precision.mean()
    mean_recall = recall.mean()
    if mean_precision + mean_recall == 0.0:
        return 0.0
    return float(2.0 * mean_precision * mean_recall / (mean_precision + mean_recall))


def micro_f1(predicted, truth):
    """F1 over label decisions pooled across instances and labels."""
    p, t = _paired(predicted, truth)
    tp = int((p & t).sum())
    fp = int((p & ~t).sum())
    fn = int((~p & t).sum())
    denominator = 2 * tp + fp + fn
    if denominator == 0:
        return 0.0
    return float(2.0 * tp / denominator)


def segment_series(values, segments=25):
    """Mean of `values` over consecutive segments.

    The stream is cut into `segments` equal pieces of len(values) // segments
    with the final segment absorbing any remainder. When there are fewer
    values than segments the series degenerates to one singleton segment per
    value.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("values must be 1-D")
    if segments < 1:
        raise ValueError(f"segments must be positive, got {segments}")
    n = arr.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.float64)
    if n < segments:
        return arr.copy()
    base = n // segments
    means = [arr[k * base:(k + 1) * base].mean() for k in range(segments - 1)]
    means.append(arr[(segments - 1) * base:].mean())
    return np.asarray(means)


def tied_average_ranks(values):
    """Rank values ascending from 1, tied values sharing the average rank."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise ValueError("values must be a non-empty 1-D sequence")
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(arr.shape[0], dtype=np.float64)
    sorted_values = arr[order]
    start = 0
    while start < arr.shape[0]:
        stop = start
        while stop < arr.shape[0] and sorted_values[stop] == sorted_values[start]:
            stop += 1
        # positions start+1 .. stop hold equal values; all get the mean position
        ranks[order[start:stop]] = (start + 1 + stop) / 2.0
        start = stop
    return ranks


@dataclass(frozen=True)
class RankTable:
    """Per-dataset ranks of competing methods plus their averages."""

    methods: tuple
    datasets: tuple
    values: np.ndarray        # (n_methods, n_datasets)
    ranks: np.ndarray         # (n_methods, n_datasets)
    average_ranks: np.ndarray  # (n_methods,)


def average_ranks(values, methods=None, datasets=None, higher_is_better=True):
    """Rank methods within every dataset column and average across datasets."""
    table = np.asarray(values, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] < 1:
        raise ValueError(f"values must be a (methods, datasets) matrix, got shape {table.shape}")
    n_methods, n_datasets = table.shape
    if methods is None:
        methods = tuple(f"method-{k}" for k in range(n_methods))
    if datasets is None:
        datasets = tuple(f"dataset-{k}" for k in range(n_datasets))
    if len(methods) != n_methods or len(datasets) != n_datasets:
        raise ValueError("methods/datasets names do not match the value matrix shape")
    ranks = np.empty_like(table)
    for column in range(n_datasets):
        scores = -table[:, column] if higher_is_better else table[:, column]
        ranks[:, column] = tied_average_ranks(scores)
    return RankTable(
        methods=tuple(methods),
        datasets=tuple(datasets),
        values=table,
        ranks=ranks,
        average_ranks=ranks.mean(axis=1),
    )


# Two-tailed Nemenyi test critical values (studentized range / sqrt(2)),
# indexed by the number of compared methods k = 2..20.
_NEMENYI_Q = {
    0.05: (
        1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948319, 3.030879,
        3.101730, 3.163684, 3.218654, 3.268004, 3.312739, 3.353618, 3.391230,
        3.426041, 3.458425, 3.488685, 3.517073, 3.543799,
    ),
    0.10: (
        1.644854, 2.052293, 2.291341, 2.459516, 2.588521, 2.692732, 2.779884,
        2.854606, 2.919889, 2.977768, 3.029694, 3.076733, 3.119693, 3.159199,
        3.195743, 3.229723, 3.261461, 3.291224, 3.319233,
    ),
}


def nemenyi_critical_distance(alpha, n_methods, n_datasets):
    """Minimum average-rank gap that is significant at level alpha.

    Supports alpha in {0.05, 0.10} and 2 to 20 compared methods.
    """
    for level, row in _NEMENYI_Q.items():
        if abs(alpha - level) < 1e-12:
            if not 2 <= n_methods <= 20:
                raise ValueError(f"n_methods must lie in [2, 20], got {n_methods}")
            if n_datasets < 1:
                raise ValueError(f"n_datasets must be positive, got {n_datasets}")
            q = row[n_methods - 2]
            return float(q * np.sqrt(n_methods * (n_methods + 1) / (6.0 * n_datasets)))
    raise ValueError(f"unsupported alpha {alpha!r}; use 0.05 or 0.10")
