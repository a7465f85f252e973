"""Label co-occurrence counting, per-label rankings, rank fusion, and rank similarity.

The drift detector summarizes a window of binary label vectors as a
co-occurrence matrix, ranks every label from the viewpoint of each other
label, fuses those local rankings into one global ranking, and compares
two global rankings with a weighted, top-heavy similarity coefficient.
All of that lives here as pure functions on numpy arrays.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import check_label_matrix

__all__ = [
    "GlobalRanking",
    "ConvergenceWarning",
    "cooccurrence_matrix",
    "local_rankings",
    "reciprocal_fusion",
    "borda_fusion",
    "condorcet_fusion",
    "mc4_fusion",
    "ws_coefficient",
    "FUSION_METHODS",
]


class ConvergenceWarning(UserWarning):
    """Raised as a warning when power iteration hits its iteration cap."""


@dataclass(eq=False)
class GlobalRanking:
    """A fused ranking of labels.

    Attributes
    ----------
    order : np.ndarray
        Label indices sorted most influential first (a permutation of 0..n-1).
    scores : np.ndarray
        Per-label fused score, indexed by label (not by rank position).
    """

    order: np.ndarray
    scores: np.ndarray

    def __post_init__(self):
        self.order = np.asarray(self.order, dtype=np.int64)
        self.scores = np.asarray(self.scores, dtype=np.float64)

    def __len__(self):
        return self.order.shape[0]

    def positions(self):
        """Return pos with pos[label] = 0-based position of the label in `order`."""
        pos = np.empty(len(self), dtype=np.int64)
        pos[self.order] = np.arange(len(self))
        return pos


def cooccurrence_matrix(window, n_labels=None):
    """Count pairwise label co-occurrences over a window of binary label vectors.

    Returns an (n, n) int64 matrix with entry (i, j) equal to the number of
    window rows where labels i and j are both 1. Symmetric, zero diagonal.
    An empty window is allowed when n_labels is given and yields all zeros.
    """
    arr = check_label_matrix(window, n_labels=n_labels)
    counts = arr.astype(np.int64).T @ arr.astype(np.int64)
    np.fill_diagonal(counts, 0)
    return counts


def _check_cooccurrence(counts):
    arr = np.asarray(counts)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"co-occurrence matrix must be square, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError("co-occurrence matrix needs at least 2 labels")
    if (np.diagonal(arr) != 0).any():
        raise ValueError("co-occurrence matrix must have a zero diagonal")
    if (arr < 0).any():
        raise ValueError("co-occurrence counts must be non-negative")
    if not (arr == arr.T).all():
        raise ValueError("co-occurrence matrix must be symmetric")
    return arr.astype(np.int64, copy=False)


def local_rankings(counts):
    """Rank, within each row of a co-occurrence matrix, all other labels.

    Row i ranks every label j != i by descending co-occurrence count with i,
    using competition ranking: tied counts share the smallest rank of their
    group. Entry (i, j) of the result is the rank of j in row i; diagonal
    entries are not ranked candidates and are set to 0 as placeholders.
    """
    m = _check_cooccurrence(counts)
    # rank of j in row i = 1 + number of candidates strictly ahead of j;
    # including k == i is harmless because the zero diagonal never exceeds a count.
    ranks = 1 + (m[:, :, None] > m[:, None, :]).sum(axis=1)
    np.fill_diagonal(ranks, 0)
    return ranks


def _check_local_rankings(ranks):
    arr = np.asarray(ranks)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"rank matrix must be square, got shape {arr.shape}")
    n = arr.shape[0]
    if n < 2:
        raise ValueError("rank matrix needs at least 2 labels")
    if (np.diagonal(arr) != 0).any():
        raise ValueError("rank matrix diagonal must hold the 0 placeholder")
    off = ~np.eye(n, dtype=bool)
    vals = arr[off]
    if (vals < 1).any() or (vals > n - 1).any():
        raise ValueError("off-diagonal ranks must lie in [1, n-1]")
    return arr.astype(np.int64, copy=False)


def reciprocal_fusion(local_ranks):
    """Fuse local rankings by reciprocal rank mass.

    Each label i receives score 1 / sum over rows r != i of 1/rank(r, i);
    lower scores mean more influence. Labels are ordered by ascending score,
    ties broken by ascending label index.
    """
    ranks = _check_local_rankings(local_ranks).astype(np.float64)
    np.fill_diagonal(ranks, np.inf)  # 1/inf = 0 drops the self entry
    denom = (1.0 / ranks).sum(axis=0)
    scores = 1.0 / denom
    order = np.argsort(scores, kind="stable")
    return GlobalRanking(order=order, scores=scores)


def borda_fusion(local_ranks):
    """Fuse local rankings by Borda points.

    Each row awards a candidate at competition rank r exactly (n-1) - r + 1
    points (tied candidates all receive the points of their shared rank).
    Labels are ordered by descending total, ties by ascending label index.
    """
    ranks = _check_local_rankings(local_ranks)
    n = ranks.shape[0]
    off = ~np.eye(n, dtype=bool)
    points = np.where(off, n - ranks, 0)
    totals = points.sum(axis=0).astype(np.float64)
    order = np.argsort(-totals, kind="stable")
    return GlobalRanking(order=order, scores=totals)


def _pairwise_wins(ranks):
    """wins[a, b] = number of rows r not in {a, b} ranking a ahead of b."""
    n = ranks.shape[0]
    rows = np.arange(n)
    valid = (rows[:, None, None] != rows[None, :, None]) & (
        rows[:, None, None] != rows[None, None, :]
    )
    ahead = ranks[:, :, None] < ranks[:, None, :]
    return (ahead & valid).sum(axis=0)


def condorcet_fusion(local_ranks):
    """Fuse local rankings by pairwise majorities.

    Label a precedes label b when a strict majority of the rows ranking both
    places a ahead of b; pairwise ties (including the 2-label case, where no
    row ranks both) fall back to ascending label index. The reported score is
    each label's total pairwise win count.
    """
    ranks = _check_local_rankings(local_ranks)
    n = ranks.shape[0]
    wins = _pairwise_wins(ranks)

    def compare(a, b):
        if wins[a, b] > wins[b, a]:
            return -1
        if wins[b, a] > wins[a, b]:
            return 1
        return -1 if a < b else 1

    order = np.asarray(sorted(range(n), key=functools.cmp_to_key(compare)))
    return GlobalRanking(order=order, scores=wins.sum(axis=1).astype(np.float64))


def mc4_fusion(local_ranks, perturbation=1e-6, tol=1e-9, max_iter=10000):
    """Fuse local rankings via the MC4 Markov chain.

    The chain moves from label i to label j with probability 1/n when j
    outranks i in a strict majority of the rows ranking both; remaining mass
    stays on i. The matrix is perturbed by `perturbation` and row-normalized,
    then power-iterated from the uniform distribution until the L1 change
    drops below `tol`. Labels are ordered by descending stationary mass,
    ties by ascending label index.
    """
    ranks = _check_local_rankings(local_ranks)
    n = ranks.shape[0]
    wins = _pairwise_wins(ranks)
    # rows ranking both a and b either order them or tie them
    both = wins + wins.T + _pairwise_ties(ranks)
    majority = wins.T > both / 2.0  # majority[i, j]: j ahead of i in most shared rows
    transition = np.where(majority, 1.0 / n, 0.0)
    np.fill_diagonal(transition, 0.0)
    np.fill_diagonal(transition, 1.0 - transition.sum(axis=1))
    transition = transition + perturbation
    transition /= transition.sum(axis=1, keepdims=True)

    dist = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = dist @ transition
        if np.abs(nxt - dist).sum() < tol:
            dist = nxt
            break
        dist = nxt
    else:
        warnings.warn(
            f"power iteration did not reach tol={tol} within {max_iter} iterations",
            ConvergenceWarning,
            stacklevel=2,
        )
    order = np.argsort(-dist, kind="stable")
    return GlobalRanking(order=order, scores=dist)


def _pairwise_ties(ranks):
    """ties[a, b] = number of rows r not in {a, b} ranking a and b equally."""
    n = ranks.shape[0]
    rows = np.arange(n)
    valid = (rows[:, None, None] != rows[None, :, None]) & (
        rows[:, None, None] != rows[None, None, :]
    )
    equal = ranks[:, :, None] == ranks[:, None, :]
    return (equal & valid).sum(axis=0)


def _order_array(ranking, name):
    if isinstance(ranking, GlobalRanking):
        arr = ranking.order
    else:
        arr = np.asarray(ranking, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D label ordering")
    n = arr.shape[0]
    if n < 2 or not np.array_equal(np.sort(arr), np.arange(n)):
        raise ValueError(f"{name} must be a permutation of 0..n-1 with n >= 2")
    return arr


def ws_coefficient(new, old):
    """Similarity of two label orderings, weighted toward the top of `new`.

    Both arguments are global rankings (or plain orderings) over the same
    label set. With pos_new / pos_old the 0-based positions of each label,

        C = 1 - sum_i 2**(-pos_new[i]) * |pos_new[i] - pos_old[i]|
                    / max(|1 - pos_new[i]|, n - pos_new[i])

    C is 1.0 exactly when the orderings agree, and lies in (-1, 1].
    """
    new_order = _order_array(new, "new ranking")
    old_order = _order_array(old, "old ranking")
    n = new_order.shape[0]
    if old_order.shape[0] != n:
        raise ValueError("rankings must cover the same label set")
    pos_new = np.empty(n, dtype=np.float64)
    pos_new[new_order] = np.arange(n)
    pos_old = np.empty(n, dtype=np.float64)
    pos_old[old_order] = np.arange(n)
    weights = 2.0 ** (-pos_new)
    denom = np.maximum(np.abs(1.0 - pos_new), n - pos_new)
    return float(1.0 - (weights * np.abs(pos_new - pos_old) / denom).sum())


FUSION_METHODS = {
    "reciprocal": reciprocal_fusion,
    "borda": borda_fusion,
    "condorcet": condorcet_fusion,
    "mc4": mc4_fusion,
}
