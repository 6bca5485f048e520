"""Uplink receivers (MRC, ZF, and fault-aware variants) plus PSK mapping.

The ``*_modified`` receivers drop the readings of known-faulty antennas
before combining, which removes the corruption entirely at the price of a
slightly smaller effective array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PSK_ORDERS = (2, 4, 8)


def mrc(H: np.ndarray, y: np.ndarray, rho: float) -> np.ndarray:
    """Matched-filter combining H* y / (sqrt(rho) M)."""
    M = H.shape[0]
    return H.conj().T @ y / (math.sqrt(rho) * M)


def mrc_modified(H: np.ndarray, y: np.ndarray, rho: float, Omega) -> np.ndarray:
    """MRC after deleting the rows in ``Omega``; normalization uses the kept count."""
    keep = _keep_rows(H.shape[0], Omega)
    return H[keep].conj().T @ y[keep] / (math.sqrt(rho) * keep.size)


def zf(H: np.ndarray, y: np.ndarray, rho: float) -> np.ndarray:
    """Pseudo-inverse receiver pinv(H) y / sqrt(rho)."""
    return np.linalg.pinv(H, rcond=1e-10) @ y / math.sqrt(rho)


def zf_modified(H: np.ndarray, y: np.ndarray, rho: float, Omega) -> np.ndarray:
    """ZF after deleting the rows in ``Omega``."""
    keep = _keep_rows(H.shape[0], Omega)
    return zf(H[keep], y[keep], rho)


def _keep_rows(M: int, Omega) -> np.ndarray:
    Omega = np.asarray(Omega, dtype=int).reshape(-1)
    keep = np.setdiff1d(np.arange(M), Omega)
    if keep.size == 0:
        raise ValueError("cannot remove every antenna")
    return keep


def asymptotic_mse_mrc(K: int, P: int) -> float:
    """Large-array limit of the fault-aware MRC detection MSE: (K^2 + K) / P."""
    if P <= 0:
        raise ValueError("P must be positive")
    return (K * K + K) / P


def asymptotic_excess_bound(K: int, gamma: float, rho: float, w_inf: float) -> float:
    """Upper bound K gamma^2 ||w||_inf^2 / rho on the MSE penalty of ignoring faults."""
    return K * gamma**2 * w_inf**2 / rho


# ---------------------------------------------------------------------------
# PSK mapping
# ---------------------------------------------------------------------------

def psk_constellation(order: int) -> np.ndarray:
    """Unit-power PSK points exp(2j pi p / order), p = 0..order-1."""
    _check_order(order)
    return np.exp(2j * np.pi * np.arange(order) / order)


def psk_modulate(bits, order: int) -> np.ndarray:
    """Gray-mapped PSK: adjacent constellation points differ in one bit."""
    _check_order(order)
    k = order.bit_length() - 1
    b = np.asarray(bits, dtype=int).reshape(-1)
    if b.size % k:
        raise ValueError(f"bit count {b.size} not a multiple of {k}")
    weights = 1 << np.arange(k - 1, -1, -1)
    gray = b.reshape(-1, k) @ weights
    return np.exp(2j * np.pi * _gray_decode(gray) / order)


def psk_demodulate(x_hat, order: int) -> np.ndarray:
    """Nearest-point decisions; returns constellation points."""
    _check_order(order)
    idx = _nearest_index(x_hat, order)
    return np.exp(2j * np.pi * idx / order)


def psk_bits(symbols, order: int) -> np.ndarray:
    """Map constellation points back to their Gray-coded bits."""
    _check_order(order)
    k = order.bit_length() - 1
    idx = _nearest_index(symbols, order)
    gray = idx ^ (idx >> 1)
    shifts = np.arange(k - 1, -1, -1)
    return ((gray[:, None] >> shifts) & 1).reshape(-1)


def _check_order(order: int) -> None:
    if order not in PSK_ORDERS:
        raise ValueError(f"order must be one of {PSK_ORDERS}, got {order}")


def _nearest_index(x, order: int) -> np.ndarray:
    x = np.asarray(x)
    return np.round(np.angle(x) * order / (2 * np.pi)).astype(int) % order


def _gray_decode(g: np.ndarray) -> np.ndarray:
    idx = np.asarray(g, dtype=int).copy()
    shift = idx >> 1
    while np.any(shift):
        idx ^= shift
        shift >>= 1
    return idx


@dataclass(frozen=True)
class ReceiverReport:
    """Per-symbol detection summary."""

    x_hat: np.ndarray
    decisions: np.ndarray
    per_symbol_mse: float


def receiver_report(x_hat: np.ndarray, x_true: np.ndarray, psk_order: int) -> ReceiverReport:
    decisions = psk_demodulate(x_hat, psk_order)
    mse = float(np.linalg.norm(np.asarray(x_hat) - np.asarray(x_true)) ** 2)
    return ReceiverReport(x_hat=np.asarray(x_hat), decisions=decisions, per_symbol_mse=mse)


def mse_mean_stderr(samples) -> tuple[float, float]:
    """Mean and standard error of a sample of per-symbol errors."""
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    mean = float(samples.mean())
    if n < 2:
        return mean, 0.0
    return mean, float(samples.std(ddof=1) / math.sqrt(n))
