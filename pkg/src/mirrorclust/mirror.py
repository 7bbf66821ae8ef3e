"""Per-network time-pair distance matrices and CMDS mirror construction.

The mirror of a dynamic network is the low-dimensional configuration whose
pairwise point distances reproduce, as closely as possible, the Procrustes
distances between the network's latent position matrices across time. It
is obtained by classical multidimensional scaling of the time-pair distance
matrix and is unique only up to an orthogonal transform.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embed import ase
from .errors import DegenerateSpectrumError, DomainError, ShapeError
from .netmodel import AdjacencySnapshot, DynamicNetwork, LatentPositions
from .numkernel import procrustes_cost, sym_eig

DIST_SYMMETRY_ATOL = 1e-12


@dataclass(frozen=True)
class DistanceMatrix:
    """Square symmetric nonnegative matrix with an exactly-zero diagonal.

    Used in two modes: T x T over a network's time points, and m x m across
    networks (mirror distances).
    """

    matrix: np.ndarray

    def __post_init__(self):
        D = np.asarray(self.matrix, dtype=np.float64)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ShapeError(f"distance matrix must be square, got {D.shape}")
        if not np.all(np.isfinite(D)):
            raise ShapeError("distance matrix contains non-finite entries")
        if D.size:
            if np.max(np.abs(D - D.T)) > DIST_SYMMETRY_ATOL:
                raise ShapeError("distance matrix is not symmetric within 1e-12")
            if np.any(np.diagonal(D) != 0.0):
                raise ShapeError("distance matrix diagonal must be exactly zero")
            if np.any(D < 0.0):
                raise ShapeError("distance matrix entries must be nonnegative")
        object.__setattr__(self, "matrix", D)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Mirror:
    """T x r CMDS configuration plus its retained spectrum.

    ``eigenvalues`` are the r retained (strictly positive, descending)
    eigenvalues of the doubly centered matrix; ``spectrum_tail`` is the
    largest discarded eigenvalue, kept as an eigengap diagnostic.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    spectrum_tail: float

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.float64)
        ev = np.asarray(self.eigenvalues, dtype=np.float64)
        if M.ndim != 2:
            raise ShapeError("mirror matrix must be 2-D")
        if ev.shape != (M.shape[1],):
            raise ShapeError("need one retained eigenvalue per mirror column")
        if np.any(ev <= 0.0):
            raise DomainError("mirror eigenvalues must be strictly positive")
        if np.any(np.diff(ev) > 0.0):
            raise DomainError("mirror eigenvalues must be descending")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def T(self) -> int:
        return self.matrix.shape[0]

    @property
    def r(self) -> int:
        return self.matrix.shape[1]


def latent_distance_matrix(Xs: Sequence[LatentPositions]) -> DistanceMatrix:
    """T x T matrix of Procrustes distances between latent position matrices,
    scaled by 1/sqrt(n) to average over vertices."""
    if not Xs:
        raise ShapeError("need at least one latent position matrix")
    mats = [X.matrix if isinstance(X, LatentPositions) else np.asarray(X, float) for X in Xs]
    shape = mats[0].shape
    for t, M in enumerate(mats):
        if M.shape != shape:
            raise ShapeError(f"latent positions at t={t} have shape {M.shape}, expected {shape}")
    T = len(mats)
    n = shape[0]
    D = np.zeros((T, T))
    for t1 in range(T):
        for t2 in range(t1 + 1, T):
            D[t1, t2] = D[t2, t1] = procrustes_cost(mats[t1], mats[t2]) / np.sqrt(n)
    return DistanceMatrix(matrix=D)


def double_center(D: DistanceMatrix) -> np.ndarray:
    """Doubly centered matrix B = -1/2 * J @ (D squared entrywise) @ J with
    J = I - 11'/T; symmetric with zero row sums."""
    M = D.matrix
    T = M.shape[0]
    J = np.eye(T) - np.ones((T, T)) / T
    B = -0.5 * (J @ (M * M) @ J)
    return (B + B.T) / 2.0


def cmds(D: DistanceMatrix, r: int) -> Mirror:
    """Classical multidimensional scaling of a distance matrix to dimension r.

    Takes the top-r algebraic eigenpairs of the doubly centered matrix and
    returns U @ diag(sqrt(eigenvalues)). Raises DegenerateSpectrumError
    (carrying the full spectrum) when the r-th eigenvalue is not positive,
    since the configuration would not be real; callers may lower r.
    """
    T = D.size
    if not 1 <= r < T:
        raise DomainError(f"mirror dimension r={r} must satisfy 1 <= r < T={T}")
    eig = sym_eig(double_center(D))
    if eig.values[r - 1] <= 0.0:
        raise DegenerateSpectrumError(
            f"eigenvalue {r} of the doubly centered matrix is {eig.values[r - 1]!r} <= 0",
            spectrum=eig.values,
        )
    retained = eig.values[:r]
    M = eig.vectors[:, :r] * np.sqrt(retained)
    return Mirror(matrix=M, eigenvalues=retained, spectrum_tail=float(eig.values[r]))


def estimate_mirror(
    net: DynamicNetwork | Sequence[AdjacencySnapshot | np.ndarray], d: int, r: int
) -> Mirror:
    """Full per-network mirror pipeline: embed every snapshot to dimension d,
    build the time-pair distance matrix, and apply CMDS to dimension r.

    Accepts a DynamicNetwork or a bare sequence of symmetric matrices (e.g.
    noiseless probability matrices).
    """
    snaps = net.snapshots if isinstance(net, DynamicNetwork) else net
    latents = [LatentPositions(matrix=ase(A, d)) for A in snaps]
    return cmds(latent_distance_matrix(latents), r)
