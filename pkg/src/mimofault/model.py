"""Uplink training simulation for a ULA base station with faulty antennas.

Generates the finite-scattering channel, orthonormal pilot blocks, row-sparse
antenna-fault corruption and additive noise, and produces the decorrelated
observation consumed by every estimator in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

AOA_MODES = ("uniform-grid", "random")


def trial_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent, reproducible RNG substream keyed by (seed, *stream).

    Distinct keys give statistically independent streams, so parallel trials
    can be generated in any order without changing the numbers.
    """
    return np.random.default_rng([int(seed), *(int(s) for s in stream)])


def _cn(rng: np.random.Generator, shape, var: float) -> np.ndarray:
    """i.i.d. circular complex Gaussian entries with per-entry variance ``var``."""
    scale = math.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@dataclass(frozen=True)
class SystemConfig:
    """Dimensions and power levels of one uplink training scenario.

    ``total_pilot_power`` defaults to ``rho * K * L`` so that every user
    spends ``rho`` per pilot symbol, matching the uplink data power.
    """

    M: int
    K: int
    L: int
    P: int
    gamma: float = 0.0
    d_over_lambda: float = 0.3
    sigma2: float = 0.1
    rho: float = 1.0
    total_pilot_power: float | None = None
    aoa_mode: str = "uniform-grid"
    seed: int = 0

    def __post_init__(self):
        if min(self.M, self.K, self.L, self.P) < 1:
            raise ValueError("M, K, L, P must be positive integers")
        if self.K > self.M:
            raise ValueError(f"K={self.K} must not exceed M={self.M}")
        if self.L < self.K:
            raise ValueError(f"pilot length L={self.L} must be >= K={self.K}")
        if self.P >= self.M:
            raise ValueError(f"path count P={self.P} must be < M={self.M}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if not 0.0 < self.d_over_lambda < 1.0:
            raise ValueError("d_over_lambda must lie in (0, 1)")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.aoa_mode not in AOA_MODES:
            raise ValueError(f"aoa_mode must be one of {AOA_MODES}")
        if self.total_pilot_power is None:
            object.__setattr__(self, "total_pilot_power", self.rho * self.K * self.L)
        elif self.total_pilot_power <= 0:
            raise ValueError("total_pilot_power must be positive")

    @property
    def S(self) -> int:
        """Number of faulty antennas, floor(gamma * M)."""
        return math.floor(self.gamma * self.M)

    @classmethod
    def from_snr(cls, snr_db: float, **kwargs) -> "SystemConfig":
        """Config with sigma2 chosen so that 10*log10(rho / sigma2) = snr_db."""
        rho = kwargs.pop("rho", 1.0)
        return cls(rho=rho, sigma2=rho * 10.0 ** (-snr_db / 10.0), **kwargs)


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the finite-scattering channel H = A @ G / sqrt(P)."""

    angles: np.ndarray  # (P,) arrival angles in [-pi/2, pi/2]
    A: np.ndarray       # (M, P) steering matrix, unit-modulus entries
    G: np.ndarray       # (P, K) path gains
    H: np.ndarray       # (M, K) channel matrix


@dataclass(frozen=True)
class FaultPattern:
    """Faulty-antenna support and the distortion amplitude used on it."""

    support: np.ndarray  # sorted row indices of the faulty antennas
    amplitude: float

    @property
    def S(self) -> int:
        return int(self.support.size)

    def indicator(self, M: int) -> np.ndarray:
        """Length-M 0/1 vector with ones on the faulty rows."""
        s = np.zeros(M, dtype=int)
        s[self.support] = 1
        return s


@dataclass(frozen=True)
class TrainingBlock:
    """One received training block Y = H X + W0 + N0."""

    pilot: np.ndarray  # (K, L) row-orthonormal pilot
    X: np.ndarray      # (K, L) power-scaled pilot
    Y: np.ndarray      # (M, L) received block
    W0: np.ndarray     # (M, L) corruption, nonzero only on faulty rows
    N0: np.ndarray     # (M, L) additive noise


@dataclass(frozen=True)
class Observation:
    """Pilot-decorrelated observation Z = channel + row-sparse faults + noise."""

    Z: np.ndarray      # (M, K)
    noise_var: float   # per-entry variance of the decorrelated noise


def steering_vector(theta: float, M: int, d_over_lambda: float) -> np.ndarray:
    """ULA response to a plane wave from angle ``theta``.

    Entry m is exp(-j 2 pi (D/lambda) sin(theta) m), m = 0..M-1.
    """
    if abs(theta) > np.pi / 2:
        raise ValueError(f"theta={theta} outside [-pi/2, pi/2]")
    if M < 1:
        raise ValueError("M must be >= 1")
    m = np.arange(M)
    return np.exp(-2j * np.pi * d_over_lambda * np.sin(theta) * m)


def sample_channel(config: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw one channel realization under ``config``.

    Arrival angles follow ``config.aoa_mode``; path gains are i.i.d. unit
    circular complex Gaussian.
    """
    P = config.P
    if config.aoa_mode == "uniform-grid":
        angles = -np.pi / 2 + np.arange(P) * np.pi / P
    else:
        angles = rng.uniform(-np.pi / 2, np.pi / 2, size=P)
    m = np.arange(config.M)[:, None]
    A = np.exp(-2j * np.pi * config.d_over_lambda * np.sin(angles)[None, :] * m)
    G = _cn(rng, (P, config.K), 1.0)
    H = A @ G / np.sqrt(P)
    return ChannelRealization(angles=angles, A=A, G=G, H=H)


def make_pilot(K: int, L: int) -> np.ndarray:
    """Deterministic row-orthonormal K x L pilot: K rows of the normalized L-point DFT."""
    if L < K:
        raise ValueError(f"need L >= K, got K={K}, L={L}")
    k = np.arange(K)[:, None]
    n = np.arange(L)[None, :]
    return np.exp(-2j * np.pi * k * n / L) / np.sqrt(L)


def sample_fault_pattern(config: SystemConfig, rng: np.random.Generator) -> FaultPattern:
    """Uniformly random S-subset of the antennas; amplitude 4 sqrt(rho)."""
    S = config.S
    support = np.sort(rng.choice(config.M, size=S, replace=False)) if S else np.zeros(0, dtype=int)
    return FaultPattern(support=support, amplitude=4.0 * math.sqrt(config.rho))


def simulate_training(
    channel: ChannelRealization,
    pilot: np.ndarray,
    faults: FaultPattern,
    config: SystemConfig,
    rng: np.random.Generator,
) -> TrainingBlock:
    """Assemble one training block Y = H X + W0 + N0.

    Faulty rows of W0 carry i.i.d. equiprobable +-1 entries scaled by the
    fault amplitude; all other rows are exactly zero.
    """
    M, K, L = config.M, config.K, config.L
    if channel.H.shape != (M, K):
        raise ValueError(f"channel shape {channel.H.shape} != ({M}, {K})")
    if pilot.shape != (K, L):
        raise ValueError(f"pilot shape {pilot.shape} != ({K}, {L})")
    X = np.sqrt(config.total_pilot_power / K) * pilot
    W0 = np.zeros((M, L), dtype=complex)
    if faults.S:
        signs = rng.choice([-1.0, 1.0], size=(faults.S, L))
        W0[faults.support] = faults.amplitude * signs
    N0 = _cn(rng, (M, L), config.sigma2) if config.sigma2 > 0 else np.zeros((M, L), dtype=complex)
    Y = channel.H @ X + W0 + N0
    return TrainingBlock(pilot=pilot, X=X, Y=Y, W0=W0, N0=N0)


def decorrelate(block: TrainingBlock, config: SystemConfig) -> Observation:
    """Match-filter the block by the pilot: Z = Y pilot* / sqrt(P_total / K).

    The decorrelated noise entries have variance K sigma2 / P_total.
    """
    scale = np.sqrt(config.total_pilot_power / config.K)
    Z = block.Y @ block.pilot.conj().T / scale
    noise_var = config.K * config.sigma2 / config.total_pilot_power
    return Observation(Z=Z, noise_var=noise_var)


def simulate_uplink(
    channel: ChannelRealization,
    faults: FaultPattern,
    rho: float,
    T: int,
    psk_order: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate T uplink data symbols y = sqrt(rho) H x + w + n.

    The fault support is static across all symbols while the distortion
    magnitudes are redrawn each symbol. Returns (X, Y) with one column per
    symbol: X is (K, T) unit-power PSK, Y is (M, T).
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if psk_order not in (2, 4, 8):
        raise ValueError(f"psk_order must be one of (2, 4, 8), got {psk_order}")
    M, K = channel.H.shape
    idx = rng.integers(0, psk_order, size=(K, T))
    X = np.exp(2j * np.pi * idx / psk_order)
    W = np.zeros((M, T), dtype=complex)
    if faults.S:
        W[faults.support] = faults.amplitude * rng.choice([-1.0, 1.0], size=(faults.S, T))
    N = _cn(rng, (M, T), 1.0)
    Y = np.sqrt(rho) * channel.H @ X + W + N
    return X, Y
