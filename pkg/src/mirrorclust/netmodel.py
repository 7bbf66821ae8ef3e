"""Network data types and sampling from the latent-position model.

A network snapshot is an undirected simple graph whose edge probabilities are
inner products of per-vertex latent position vectors (P = X @ X.T). Dynamic
networks are sequences of such snapshots over a common vertex set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, ShapeError
from .util import derive_seed

INNER_PRODUCT_TOL = 1e-12


@dataclass(frozen=True)
class LatentPositions:
    """n x d matrix of vertex positions, one row per vertex."""

    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.float64)
        if M.ndim != 2:
            raise ShapeError(f"latent positions must be 2-D, got ndim={M.ndim}")
        if not np.all(np.isfinite(M)):
            raise ShapeError("latent positions contain non-finite entries")
        object.__setattr__(self, "matrix", M)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class AdjacencySnapshot:
    """Symmetric 0/1 adjacency matrix with a zero diagonal."""

    matrix: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.matrix)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ShapeError(f"adjacency matrix must be square, got {A.shape}")
        if not np.array_equal(A, A.T):
            raise ShapeError("adjacency matrix must be symmetric")
        if A.size and np.any(np.diagonal(A) != 0):
            raise ShapeError("adjacency matrix must have a zero diagonal")
        if not np.isin(A, (0, 1)).all():
            raise ShapeError("adjacency entries must be 0 or 1")
        object.__setattr__(self, "matrix", A.astype(np.uint8))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DynamicNetwork:
    """A named sequence of adjacency snapshots over a common vertex set.

    The clustering pipeline needs at least two time points; construction
    allows a single snapshot so samplers compose (T=1 reduces to one draw).
    """

    id: str
    snapshots: tuple[AdjacencySnapshot, ...] = field(default_factory=tuple)

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        if not snaps:
            raise ShapeError("dynamic network needs at least one snapshot")
        n = snaps[0].n
        for k, snap in enumerate(snaps):
            if snap.n != n:
                raise ShapeError(
                    f"snapshot {k} of network {self.id!r} has {snap.n} vertices, expected {n}"
                )
        object.__setattr__(self, "snapshots", snaps)

    @property
    def n(self) -> int:
        return self.snapshots[0].n

    @property
    def T(self) -> int:
        return len(self.snapshots)


def probability_matrix(X: LatentPositions) -> np.ndarray:
    """Connection probability matrix P = X @ X.T.

    Raises DomainError naming the first offending vertex pair if any inner
    product falls outside [0, 1] beyond round-off; round-off within 1e-12 is
    clamped back into the interval.
    """
    P = X.matrix @ X.matrix.T
    bad = (P < -INNER_PRODUCT_TOL) | (P > 1.0 + INNER_PRODUCT_TOL)
    if np.any(bad):
        i, j = np.unravel_index(int(np.argmax(bad)), P.shape)
        raise DomainError(
            f"inner product of vertices ({i}, {j}) is {P[i, j]!r}, outside [0, 1]"
        )
    return np.clip(P, 0.0, 1.0)


def rdpg_sample(X: LatentPositions, seed: int) -> AdjacencySnapshot:
    """One adjacency snapshot: independent Bernoulli(P_ij) draws for i < j,
    mirrored below the diagonal; deterministic given the seed."""
    P = probability_matrix(X)
    n = X.n
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    draws = (rng.random(iu[0].size) < P[iu]).astype(np.uint8)
    A = np.zeros((n, n), dtype=np.uint8)
    A[iu] = draws
    A += A.T
    return AdjacencySnapshot(matrix=A)


def sample_dynamic_network(
    Xs: Sequence[LatentPositions], seed: int, network_id: str = "net"
) -> DynamicNetwork:
    """Sample one snapshot per time point, independently across t.

    Each snapshot uses the derived seed ``hash64(seed, network_id, t)``, so
    sampling is reproducible and order-independent under parallelism.
    """
    if not Xs:
        raise ShapeError("need at least one latent position matrix")
    n = Xs[0].n
    for t, X in enumerate(Xs):
        if X.n != n:
            raise ShapeError(f"latent positions at t={t} have n={X.n}, expected {n}")
    snaps = tuple(
        rdpg_sample(X, derive_seed(seed, network_id, t)) for t, X in enumerate(Xs)
    )
    return DynamicNetwork(id=network_id, snapshots=snaps)
