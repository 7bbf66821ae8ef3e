"""Shared test utilities and independent oracles."""
from __future__ import annotations

import math

import numpy as np

from mirrorclust import DistanceMatrix


def random_orthogonal(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-ish random orthogonal matrix via QR with sign correction."""
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    return q * np.sign(np.diag(r))


def grid_procrustes_cost(X1: np.ndarray, X2: np.ndarray, n_angles: int = 3600) -> float:
    """Brute-force min of ||X1 @ O - X2||_F over a rotation grid and the
    reflected grid; oracle for the closed-form d=2 Procrustes cost."""
    assert X1.shape[1] == 2
    thetas = np.linspace(0.0, 2.0 * np.pi, n_angles, endpoint=False)
    rot = np.stack(
        [np.stack([np.cos(thetas), -np.sin(thetas)], axis=1),
         np.stack([np.sin(thetas), np.cos(thetas)], axis=1)],
        axis=1,
    )
    flip = np.diag([1.0, -1.0])
    cands = np.concatenate([rot, rot @ flip])
    return float(np.linalg.norm(X1 @ cands - X2, axis=(1, 2)).min())


def elbow_loglik_oracle(eigenvalues: np.ndarray, max_rank: int) -> int:
    """Literal two-piece Gaussian profile likelihood scan, written
    independently of the library implementation."""
    ev = np.asarray(eigenvalues, dtype=float)
    L = ev.size
    best_q, best = 1, -math.inf
    for q in range(1, max_rank + 1):
        g1, g2 = ev[:q], ev[q:]
        ss = np.sum((g1 - g1.mean()) ** 2)
        if g2.size:
            ss += np.sum((g2 - g2.mean()) ** 2)
        var = ss / L
        if var < 1e-20 * max(1.0, ev[0] ** 2):
            ll = math.inf
        else:
            ll = sum(
                -0.5 * math.log(2 * math.pi * var) - (x - g.mean()) ** 2 / (2 * var)
                for g in (g1, g2)
                for x in g
            )
        if ll > best:
            best_q, best = q, ll
    return best_q


def euclidean_distance_matrix(points: np.ndarray) -> DistanceMatrix:
    diffs = points[:, None, :] - points[None, :, :]
    D = np.sqrt((diffs**2).sum(axis=2))
    D = (D + D.T) / 2.0
    np.fill_diagonal(D, 0.0)
    return DistanceMatrix(matrix=D)


def random_block_distance(
    rng: np.random.Generator, m: int, K: int
) -> tuple[DistanceMatrix, np.ndarray]:
    """Distance matrix with strict block separation plus the planted labels."""
    labels = np.concatenate([np.arange(1, K + 1), rng.integers(1, K + 1, size=m - K)])
    rng.shuffle(labels)
    D = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            if labels[i] == labels[j]:
                D[i, j] = D[j, i] = rng.uniform(0.0, 0.4)
            else:
                D[i, j] = D[j, i] = rng.uniform(0.5, 1.5)
    return DistanceMatrix(matrix=D), labels
