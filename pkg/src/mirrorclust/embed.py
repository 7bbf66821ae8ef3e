"""Adjacency spectral embedding and embedding-dimension selection."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .netmodel import AdjacencySnapshot
from .numkernel import SymEig, sym_eig


@dataclass(frozen=True)
class EmbeddingConfig:
    """How to pick the embedding dimension: a fixed d, or the scree-elbow
    rule scanning split points up to ``max_rank``."""

    d: int = 1
    dim_rule: str = "fixed"  # "fixed" | "elbow"
    max_rank: int = 10

    def __post_init__(self):
        if self.dim_rule not in ("fixed", "elbow"):
            raise DomainError(f"unknown dim_rule {self.dim_rule!r}")
        if self.d < 1:
            raise DomainError("embedding dimension d must be >= 1")


def _snapshot_matrix(A: AdjacencySnapshot | np.ndarray) -> np.ndarray:
    if isinstance(A, AdjacencySnapshot):
        return A.matrix.astype(np.float64)
    return np.asarray(A, dtype=np.float64)


def ase_from_eig(eig: SymEig, d: int) -> np.ndarray:
    """Embedding from a precomputed eigendecomposition.

    Selects the d eigenpairs of largest magnitude, breaking magnitude ties
    toward the algebraically larger eigenvalue and then the lower index, and
    scales eigenvectors by sqrt(|eigenvalue|).
    """
    n = eig.values.shape[0]
    if not 1 <= d <= n:
        raise DomainError(f"embedding dimension d={d} not in [1, {n}]")
    # stable sort of the algebraic-descending values implements both tie-breaks
    order = np.argsort(-np.abs(eig.values), kind="stable")[:d]
    return eig.vectors[:, order] * np.sqrt(np.abs(eig.values[order]))


def ase(A: AdjacencySnapshot | np.ndarray, d: int) -> np.ndarray:
    """Adjacency spectral embedding: n x d estimated latent positions.

    Accepts an AdjacencySnapshot or any symmetric matrix (e.g. a noiseless
    probability matrix). Column signs are deterministic via ``sym_eig``.
    """
    return ase_from_eig(sym_eig(_snapshot_matrix(A)), d)


def snapshot_spectrum(A: AdjacencySnapshot | np.ndarray) -> np.ndarray:
    """Eigenvalue magnitudes of a snapshot, descending; input to the elbow rule."""
    values = np.linalg.eigvalsh(_snapshot_matrix(A))
    return np.sort(np.abs(values))[::-1]


def select_dim_elbow(eigenvalues: Sequence[float], max_rank: int) -> int:
    """Scree-plot elbow via a two-piece Gaussian profile log-likelihood.

    For each split q in 1..max_rank the magnitude-sorted eigenvalues are
    modeled as two Gaussian groups with separate means and a pooled variance;
    the q maximizing the profile likelihood is returned, ties to the lowest q.
    """
    ev = np.asarray(eigenvalues, dtype=np.float64)
    if ev.ndim != 1 or ev.size < 2:
        raise DomainError("elbow selection needs at least 2 eigenvalues")
    if not 1 <= max_rank <= ev.size:
        raise DomainError(f"max_rank={max_rank} not in [1, {ev.size}]")
    L = ev.size
    var_floor = 1e-20 * max(1.0, float(ev[0]) ** 2)
    best_q, best_ll = 1, -math.inf
    for q in range(1, max_rank + 1):
        head, tail = ev[:q], ev[q:]
        ss = float(np.sum((head - head.mean()) ** 2))
        if tail.size:
            ss += float(np.sum((tail - tail.mean()) ** 2))
        var = ss / L
        if var < var_floor:
            ll = math.inf  # both pieces (near-)constant: perfect fit
        else:
            ll = -0.5 * L * (math.log(2.0 * math.pi * var) + 1.0)
        if ll > best_ll:
            best_q, best_ll = q, ll
    return best_q
