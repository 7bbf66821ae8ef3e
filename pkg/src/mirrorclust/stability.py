"""Replicate-concentration and label-similarity analysis over a dendrogram.

Given true labels for the leaves (e.g. which perturbation produced each
replicate network), these tools quantify how concentrated each label's
replicates stay as the dendrogram is cut into K = 1..K_max clusters:
contingency tables, per-label maximum frequency-rate curves, their
normalized areas under the curve, and pairwise Jaccard distances between
label distributions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cluster import Dendrogram, Labeling, cut
from .errors import DomainError, ShapeError

JACCARD_VARIANTS = ("weighted", "support")


@dataclass(frozen=True)
class ContingencyTable:
    """counts[i, k] = number of label-i items landing in cluster k."""

    counts: np.ndarray
    label_sizes: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        sizes = np.asarray(self.label_sizes, dtype=np.int64)
        if counts.ndim != 2 or sizes.shape != (counts.shape[0],):
            raise ShapeError("contingency counts must be L x K with one size per label")
        if np.any(counts.sum(axis=1) != sizes):
            raise ShapeError("contingency row sums must equal label sizes")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "label_sizes", sizes)

    def rates(self) -> np.ndarray:
        """Frequency rates: counts normalized by label size; rows sum to 1."""
        return self.counts / self.label_sizes[:, None]


@dataclass(frozen=True)
class StabilityCurve:
    """Per-label maximum frequency rate as a function of K = 1..K_max."""

    k_values: np.ndarray
    max_rate: np.ndarray  # shape (L, K_max)

    @property
    def k_max(self) -> int:
        return int(self.k_values[-1])


def _as_labels(values: Sequence[int] | np.ndarray | Labeling, count: int, name: str) -> np.ndarray:
    lab = values.labels if isinstance(values, Labeling) else np.asarray(values, dtype=np.int64)
    if lab.ndim != 1:
        raise ShapeError(f"{name} must be a 1-D vector")
    if lab.min(initial=1) < 1 or lab.max(initial=1) > count:
        raise DomainError(f"{name} must lie in 1..{count}")
    return lab


def contingency(
    labels_true: Sequence[int] | np.ndarray,
    labels_cluster: Labeling | Sequence[int],
    L: int,
    K: int,
) -> ContingencyTable:
    """Cross-tabulate true labels (1..L) against cluster ids (1..K)."""
    lt = _as_labels(labels_true, L, "true labels")
    lc = _as_labels(labels_cluster, K, "cluster labels")
    if lt.size != lc.size:
        raise ShapeError(f"label vectors differ in length: {lt.size} vs {lc.size}")
    counts = np.zeros((L, K), dtype=np.int64)
    np.add.at(counts, (lt - 1, lc - 1), 1)
    return ContingencyTable(counts=counts, label_sizes=counts.sum(axis=1))


def _rates_at(dendro: Dendrogram, labels_true: np.ndarray, L: int, K: int) -> np.ndarray:
    labels = cut(dendro, K)
    return contingency(labels_true, labels, L, K).rates()


def max_frequency_curve(
    dendro: Dendrogram, labels_true: Sequence[int] | np.ndarray, K_max: int
) -> StabilityCurve:
    """Cut at every K in 1..K_max and record each label's maximum frequency
    rate; a flat curve at 1 means the label's replicates never split."""
    if not 1 <= K_max <= dendro.leaves:
        raise DomainError(f"K_max={K_max} not in [1, {dendro.leaves}]")
    lt = np.asarray(labels_true, dtype=np.int64)
    if lt.size != dendro.leaves:
        raise ShapeError(f"{lt.size} labels for {dendro.leaves} leaves")
    L = int(lt.max())
    _as_labels(lt, L, "true labels")
    rows = [_rates_at(dendro, lt, L, K).max(axis=1) for K in range(1, K_max + 1)]
    return StabilityCurve(k_values=np.arange(1, K_max + 1), max_rate=np.column_stack(rows))


def normalized_auc(curve: StabilityCurve) -> np.ndarray:
    """Trapezoidal area of each label's curve over K in [1, K_max], divided
    by (K_max - 1) so a never-splitting label scores exactly 1."""
    if curve.k_max < 2:
        raise DomainError("normalized AUC needs K_max >= 2")
    area = np.trapezoid(curve.max_rate, curve.k_values, axis=1)
    return area / (curve.k_max - 1)


def _pairwise_jaccard(rates: np.ndarray, variant: str) -> np.ndarray:
    if variant == "support":
        rates = (rates > 0.0).astype(float)
    mins = np.minimum(rates[:, None, :], rates[None, :, :]).sum(axis=2)
    maxs = np.maximum(rates[:, None, :], rates[None, :, :]).sum(axis=2)
    D = 1.0 - mins / maxs
    np.fill_diagonal(D, 0.0)
    return D


def jaccard_label_distances(
    dendro: Dendrogram,
    labels_true: Sequence[int] | np.ndarray,
    K: int,
    variant: str = "weighted",
) -> np.ndarray:
    """L x L Jaccard distances between label distributions across the K
    clusters of one cut.

    The default compares frequency-rate vectors with the weighted Jaccard
    distance 1 - sum(min)/sum(max); ``variant="support"`` compares only the
    sets of occupied clusters. 0 means identical distributions.
    """
    if variant not in JACCARD_VARIANTS:
        raise DomainError(f"unknown jaccard variant {variant!r}")
    lt = np.asarray(labels_true, dtype=np.int64)
    if lt.size != dendro.leaves:
        raise ShapeError(f"{lt.size} labels for {dendro.leaves} leaves")
    L = int(lt.max())
    _as_labels(lt, L, "true labels")
    return _pairwise_jaccard(_rates_at(dendro, lt, L, K), variant)


def jaccard_auc_matrix(
    dendro: Dendrogram,
    labels_true: Sequence[int] | np.ndarray,
    K_max: int,
    variant: str = "weighted",
) -> tuple[np.ndarray, np.ndarray]:
    """Per-K stack of Jaccard distance matrices for K = 1..K_max, plus the
    matrix of normalized AUCs over the K range."""
    if K_max < 2:
        raise DomainError("jaccard AUC needs K_max >= 2")
    stack = np.stack(
        [jaccard_label_distances(dendro, labels_true, K, variant) for K in range(1, K_max + 1)]
    )
    auc = np.trapezoid(stack, np.arange(1, K_max + 1), axis=0) / (K_max - 1)
    return stack, auc
