"""Three-term matrix decomposers built on an exchange ADMM loop.

``decompose`` splits the observation into channel + row-sparse faults +
noise, dispatching the channel update to one of three prox backends:
the semidefinite steering-atom prox (exAD), its FFT-gridded group-lasso
approximation (fsAD), or singular-value thresholding (stPCP).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .metrics import row_linf_norm, spectral_norm
from .model import Observation
from .prox import (
    AdmmControls,
    GridOperator,
    l21_norm,
    nuclear_norm,
    prox_atomic_grid,
    prox_atomic_sdp,
    prox_nuclear,
    prox_row_l21,
)

METHODS = ("exAD", "fsAD", "stPCP")

_DEFAULT_INNER = {"exAD": AdmmControls(max_iters=200), "fsAD": AdmmControls(max_iters=500)}


@dataclass
class SolverParams:
    """Decomposer configuration.

    ``tau1_scale`` and ``tau2_scale`` multiply the spectral norm and the max
    row norm of the observation to form the two regularization levels;
    ``tau2_scale = inf`` pins the fault estimate at zero. ``grid_N`` is the
    fsAD grid size (default M*K).
    """

    method: str = "exAD"
    tau1_scale: float = 0.3
    tau2_scale: float = 0.5
    grid_N: int | None = None
    outer: AdmmControls = field(
        default_factory=lambda: AdmmControls(max_iters=100, tol_primal=1e-4, tol_dual=1e-4)
    )
    inner: AdmmControls | None = None
    support_threshold_rel: float = 0.1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not 0.0 <= self.tau1_scale <= 1.0:
            raise ValueError("tau1_scale must lie in [0, 1]")
        if self.tau2_scale < 0.0:
            raise ValueError("tau2_scale must be nonnegative")
        if not 0.0 < self.support_threshold_rel < 1.0:
            raise ValueError("support_threshold_rel must lie in (0, 1)")


@dataclass
class EstimationResult:
    """Decomposition output: estimates, detected support, convergence record."""

    H_hat: np.ndarray
    W_hat: np.ndarray
    N_hat: np.ndarray
    detected_support: np.ndarray     # length-M 0/1 vector
    outer_iterations: int
    objective_trace: np.ndarray
    converged: bool
    inner_converged: bool = True


def detect_faults(W_hat: np.ndarray, threshold_rel: float, abs_floor: float = 0.0) -> np.ndarray:
    """Flag rows whose norm exceeds threshold_rel times the largest row norm.

    ``abs_floor`` raises the cut so that pure-noise residuals are not
    flagged; an all-zero input yields an all-zero support.
    """
    if not 0.0 < threshold_rel < 1.0:
        raise ValueError("threshold_rel must lie in (0, 1)")
    norms = np.linalg.norm(np.asarray(W_hat), axis=1)
    peak = norms.max() if norms.size else 0.0
    if peak == 0.0:
        return np.zeros(norms.size, dtype=int)
    cut = max(threshold_rel * peak, abs_floor)
    return (norms > cut).astype(int)


def decompose(obs: Observation | np.ndarray, params: SolverParams) -> EstimationResult:
    """Split the observation into channel, row-sparse fault, and noise parts.

    Exchange-ADMM outer loop: the three blocks are updated by their proxes
    around the running average, then the scaled dual absorbs the consensus
    gap against the observation. Stops when || H + W + N - Z ||_F falls
    below the outer tolerance relative to ||Z||_F.
    """
    if isinstance(obs, Observation):
        Z = np.asarray(obs.Z, dtype=complex)
        noise_var = obs.noise_var
    else:
        Z = np.asarray(obs, dtype=complex)
        noise_var = None
    if not np.all(np.isfinite(Z.view(float))):
        raise ValueError("observation contains non-finite entries")
    M, K = Z.shape

    tau1 = params.tau1_scale * spectral_norm(Z)
    if math.isinf(params.tau2_scale):
        tau2 = math.inf
    else:
        tau2 = params.tau2_scale * row_linf_norm(Z)

    inner = params.inner or _DEFAULT_INNER.get(params.method, AdmmControls())
    op = None
    if params.method == "fsAD":
        op = GridOperator(M, params.grid_N if params.grid_N is not None else M * K)

    H = np.zeros_like(Z)
    W = np.zeros_like(Z)
    N = np.zeros_like(Z)
    U = np.zeros_like(Z)
    inner_state = None
    inner_converged = True
    z_norm = np.linalg.norm(Z)
    trace = []
    converged = False
    iterations = 0

    for iterations in range(1, params.outer.max_iters + 1):
        offset = Z / 3.0 - (H + W + N) / 3.0 - U
        V1 = H + offset
        V2 = W + offset
        V3 = N + offset

        if params.method == "exAD":
            res = prox_atomic_sdp(V1, tau1, inner, state=inner_state)
            H = res.H
            inner_state = res.state
            inner_converged &= res.converged
            h_norm = res.norm_value
        elif params.method == "fsAD":
            res = prox_atomic_grid(V1, tau1, op, inner, state=inner_state)
            H = res.H
            inner_state = res.state
            inner_converged &= res.converged
            h_norm = l21_norm(res.Gbar)
        else:  # stPCP
            H = prox_nuclear(V1, tau1)
            h_norm = nuclear_norm(H)

        W = prox_row_l21(V2, tau2)
        N = 0.5 * V3
        U = U + (H + W + N) / 3.0 - Z / 3.0

        w_norm = l21_norm(W)
        obj = 0.5 * np.linalg.norm(N) ** 2 + tau1 * h_norm
        if w_norm > 0.0:
            obj += tau2 * w_norm
        trace.append(obj)

        resid = np.linalg.norm(H + W + N - Z) / max(z_norm, np.finfo(float).tiny)
        if resid <= params.outer.tol_primal:
            converged = True
            break

    floor = 3.0 * math.sqrt(K * noise_var) if noise_var else 0.0
    support = detect_faults(W, params.support_threshold_rel, abs_floor=floor)
    return EstimationResult(
        H_hat=H,
        W_hat=W,
        N_hat=N,
        detected_support=support,
        outer_iterations=iterations,
        objective_trace=np.asarray(trace),
        converged=converged,
        inner_converged=inner_converged,
    )
