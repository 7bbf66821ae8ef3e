"""Dense numeric kernels: symmetric eigendecomposition, SVD, and orthogonal
Procrustes alignment.

Everything downstream (spectral embedding, CMDS, mirror distances) is built
on these three primitives. Decompositions are delegated to LAPACK via
``numpy.linalg``; this module adds validation, deterministic sign
conventions, and the closed-form Procrustes cost.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ShapeError

SYMMETRY_ATOL = 1e-12


@dataclass(frozen=True)
class SymEig:
    """Full eigendecomposition of a symmetric matrix.

    ``values`` are sorted by descending algebraic value; ``vectors[:, j]``
    is the unit eigenvector paired with ``values[j]``. Each column is
    sign-flipped so its largest-magnitude entry is positive.
    """

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class Svd:
    """Thin SVD ``M = u @ diag(s) @ v.T`` with ``s`` descending."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


def _fix_column_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the first largest-magnitude entry of each is positive."""
    if vectors.shape[1] == 0:
        return vectors
    lead = np.abs(vectors).argmax(axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _as_2d_float(M: np.ndarray, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise ShapeError(f"{name} must be a 2-D matrix, got ndim={M.ndim}")
    if not np.all(np.isfinite(M)):
        raise ShapeError(f"{name} contains non-finite entries")
    return M


def sym_eig(A: np.ndarray) -> SymEig:
    """Eigendecomposition of a symmetric real matrix.

    Parameters
    ----------
    A : (n, n) array
        Symmetric within 1e-12 (absolute), finite entries.

    Returns
    -------
    SymEig with eigenvalues in descending algebraic order and orthonormal,
    sign-normalized eigenvector columns.
    """
    A = _as_2d_float(A, "A")
    n, m = A.shape
    if n != m:
        raise ShapeError(f"sym_eig needs a square matrix, got {n}x{m}")
    if n > 0 and np.max(np.abs(A - A.T)) > SYMMETRY_ATOL:
        raise ShapeError("sym_eig input is not symmetric within 1e-12")
    try:
        values, vectors = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed to converge for {n}x{n} matrix") from exc
    order = np.arange(n - 1, -1, -1)
    return SymEig(values=values[order], vectors=_fix_column_signs(vectors[:, order]))


def svd(M: np.ndarray) -> Svd:
    """Thin SVD with sign-normalized left singular vectors.

    Paired sign flips are applied to (u, v) columns, which leaves both the
    reconstruction and any product ``u @ v.T`` unchanged.
    """
    M = _as_2d_float(M, "M")
    try:
        u, s, vt = np.linalg.svd(M, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"SVD failed to converge for {M.shape[0]}x{M.shape[1]} matrix"
        ) from exc
    v = vt.T
    if u.shape[1]:
        lead = np.abs(u).argmax(axis=0)
        signs = np.sign(u[lead, np.arange(u.shape[1])])
        signs[signs == 0] = 1.0
        u = u * signs
        v = v * signs
    return Svd(u=u, s=s, v=v)


def _check_same_shape(X1: np.ndarray, X2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X1 = _as_2d_float(X1, "X1")
    X2 = _as_2d_float(X2, "X2")
    if X1.shape != X2.shape:
        raise ShapeError(f"shape mismatch: {X1.shape} vs {X2.shape}")
    return X1, X2


def procrustes_align(X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
    """Orthogonal matrix minimizing ``||X1 @ O - X2||_F``.

    Solution is ``u @ v.T`` from the SVD of ``X1.T @ X2``.
    """
    X1, X2 = _check_same_shape(X1, X2)
    dec = svd(X1.T @ X2)
    return dec.u @ dec.v.T


def procrustes_cost(X1: np.ndarray, X2: np.ndarray) -> float:
    """``min_O ||X1 @ O - X2||_F`` over the orthogonal group.

    Mathematically ``sqrt(||X1||_F^2 + ||X2||_F^2 - 2 * sum(s))`` with ``s``
    the singular values of ``X1.T @ X2``, but evaluated as the norm of the
    aligned difference: the trace form loses half the significant digits to
    cancellation near zero, where distances between orthogonally equivalent
    inputs must vanish to full precision.
    """
    X1, X2 = _check_same_shape(X1, X2)
    dec = svd(X1.T @ X2)
    return float(np.linalg.norm(X1 @ (dec.u @ dec.v.T) - X2))
