"""Classical pilot-aided channel estimators: LS, LS-SLS, and MMSE."""

from __future__ import annotations

import numpy as np


def _right_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """A @ inv(B) for Hermitian B, via a factorized solve."""
    return np.linalg.solve(B.conj().T, A.conj().T).conj().T


def estimate_ls(Y: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Least-squares estimate Y X* (X X*)^-1."""
    Xh = X.conj().T
    return _right_solve(Y @ Xh, X @ Xh)


def estimate_ls_sls(
    Y: np.ndarray,
    X: np.ndarray,
    sigma2: float,
    M: int,
    K: int,
    total_power: float | None = None,
) -> np.ndarray:
    """Scaled least-squares estimate.

    Shrinks Y X* by K tr(Y Y*) / (P_total (sigma2 K M + tr(Y Y*))) with
    P_total = ||X||_F^2. Returns the zero matrix when tr(Y Y*) = 0.
    """
    if total_power is None:
        total_power = float(np.linalg.norm(X) ** 2)
    energy = float(np.linalg.norm(Y) ** 2)  # tr(Y Y*)
    if energy == 0.0:
        return np.zeros((Y.shape[0], X.shape[0]), dtype=complex)
    scale = K * energy / (total_power * (sigma2 * K * M + energy))
    return scale * (Y @ X.conj().T)


def estimate_mmse(
    Y: np.ndarray,
    X: np.ndarray,
    A: np.ndarray,
    total_power: float | None = None,
    K: int | None = None,
) -> np.ndarray:
    """Estimate (K / P_total) A (A* A)^-1 A* Y X*.

    Requires the steering matrix A; projects the LS-type statistic onto the
    column space of A.
    """
    if total_power is None:
        total_power = float(np.linalg.norm(X) ** 2)
    if K is None:
        K = X.shape[0]
    stat = Y @ X.conj().T
    proj = A @ np.linalg.solve(A.conj().T @ A, A.conj().T @ stat)
    return (K / total_power) * proj
