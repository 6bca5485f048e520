"""Scoring utilities: estimation error, detection error, SER, matrix norms."""

from __future__ import annotations

import numpy as np

#: dB value reported for an exact (zero-error) channel estimate.
EXACT_RECOVERY_DB = -300.0


def normalized_error_db(H: np.ndarray, H_hat: np.ndarray) -> float:
    """10 log10( ||H - H_hat||_F^2 / (M K) ), floored at -300 dB."""
    H = np.asarray(H)
    H_hat = np.asarray(H_hat)
    if H.shape != H_hat.shape:
        raise ValueError(f"shape mismatch: {H.shape} vs {H_hat.shape}")
    mse = np.linalg.norm(H - H_hat) ** 2 / H.size
    if mse == 0.0:
        return EXACT_RECOVERY_DB
    return max(float(10.0 * np.log10(mse)), EXACT_RECOVERY_DB)


def detection_error(s, s_hat) -> int:
    """Hamming distance between two binary support vectors (misses + false alarms)."""
    s = np.asarray(s)
    s_hat = np.asarray(s_hat)
    if s.shape != s_hat.shape:
        raise ValueError(f"length mismatch: {s.shape} vs {s_hat.shape}")
    return int(np.count_nonzero(s != s_hat))


def spectral_norm(Z: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(Z, 2))


def row_linf_norm(Z: np.ndarray) -> float:
    """Largest Euclidean row norm, max_i ||Z[i, :]||_2."""
    return float(np.linalg.norm(Z, axis=1).max())


def symbol_error_rate(decisions, truth) -> float:
    """Fraction of symbols where the decision differs from the truth."""
    decisions = np.asarray(decisions)
    truth = np.asarray(truth)
    if decisions.shape != truth.shape:
        raise ValueError(f"length mismatch: {decisions.shape} vs {truth.shape}")
    wrong = ~np.isclose(decisions, truth, rtol=1e-9, atol=1e-9)
    return float(np.mean(wrong))
