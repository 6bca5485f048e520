"""Proximal operators and norm evaluators for the matrix decomposers.

Covers the cheap closed forms (row-wise shrinkage, Frobenius, nuclear), the
steering-atom norm prox solved through a Toeplitz-constrained semidefinite
program, its gridded group-lasso counterpart accelerated with FFTs, and the
dual-norm oracle used to calibrate regularization levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class AdmmControls:
    """Iteration limits and stopping tolerances for the iterative prox solvers."""

    penalty: float = 1.0
    max_iters: int = 200
    tol_primal: float = 1e-5
    tol_dual: float = 1e-5

    def __post_init__(self):
        if self.penalty <= 0:
            raise ValueError("penalty must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol_primal < 0 or self.tol_dual < 0:
            raise ValueError("tolerances must be nonnegative")


# ---------------------------------------------------------------------------
# closed-form proxes
# ---------------------------------------------------------------------------

def prox_row_l21(V: np.ndarray, t: float) -> np.ndarray:
    """Row-wise shrinkage: each row scaled by (1 - t / ||row||_2)_+."""
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    V = np.asarray(V)
    if t == 0:
        return V.copy()
    norms = np.linalg.norm(V, axis=1)
    scale = np.zeros_like(norms)
    nz = norms > 0
    scale[nz] = np.maximum(0.0, 1.0 - t / norms[nz])
    return V * scale[:, None]


def prox_fro(V: np.ndarray) -> np.ndarray:
    """Prox of (1/2)||.||_F^2 at unit weight: V / 2."""
    return np.asarray(V) / 2.0


def prox_nuclear(V: np.ndarray, t: float) -> np.ndarray:
    """Singular-value soft thresholding at level ``t``."""
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    V = np.asarray(V)
    if t == 0:
        return V.copy()
    U, s, Vh = np.linalg.svd(V, full_matrices=False)
    s = np.maximum(s - t, 0.0)
    return (U * s) @ Vh


def nuclear_norm(V: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(V, compute_uv=False).sum())


def l21_norm(V: np.ndarray) -> float:
    """Sum of Euclidean row norms."""
    return float(np.linalg.norm(V, axis=1).sum())


# ---------------------------------------------------------------------------
# steering-atom norm via the Toeplitz-constrained SDP
# ---------------------------------------------------------------------------

@dataclass
class SdpState:
    """Warm-startable iterate of the semidefinite prox solver.

    ``a`` generates the Hermitian Toeplitz block (first column), ``B`` is the
    lower-right block, ``Q`` the positive-semidefinite consensus copy of the
    assembled block matrix, ``Lambda`` the (scaled) dual, ``H`` the estimate.
    """

    a: np.ndarray
    B: np.ndarray
    Q: np.ndarray
    Lambda: np.ndarray
    H: np.ndarray


@dataclass
class SdpProxResult:
    H: np.ndarray
    objective_trace: np.ndarray
    converged: bool
    norm_value: float       # (1/2) Tr(T(a)) + (1/2) Tr(B) at the final iterate
    state: SdpState | None


def toeplitz_hermitian(a: np.ndarray) -> np.ndarray:
    """Hermitian Toeplitz matrix with first column ``a`` (a[0] taken real)."""
    a = np.asarray(a, dtype=complex).copy()
    a[0] = a[0].real
    idx = np.subtract.outer(np.arange(a.size), np.arange(a.size))
    vals = a[np.abs(idx)]
    return np.where(idx >= 0, vals, vals.conj())


def _subdiagonal_means(X: np.ndarray) -> np.ndarray:
    """Mean of each subdiagonal i - j = d >= 0; least-squares Toeplitz fit."""
    M = X.shape[0]
    return np.array([np.diagonal(X, -d).mean() for d in range(M)])


def _psd_project(S: np.ndarray) -> np.ndarray:
    """Nearest Hermitian PSD matrix: eigendecompose, clamp negative eigenvalues."""
    w, U = np.linalg.eigh((S + S.conj().T) / 2.0)
    w = np.maximum(w, 0.0)
    out = (U * w) @ U.conj().T
    return (out + out.conj().T) / 2.0


def _atomic_sdp_admm(
    V: np.ndarray,
    weight: float,
    controls: AdmmControls,
    state: SdpState | None,
    solve_h: bool,
):
    """Shared consensus-ADMM driver for the Toeplitz-constrained SDP.

    With ``solve_h`` the data term (1/2)||H - V||_F^2 is active and the trace
    objective carries ``weight``; otherwise H stays fixed at ``V`` and the
    plain trace objective is minimized (norm evaluation).
    """
    M, K = V.shape
    rho = controls.penalty
    if state is None:
        a = np.zeros(M, dtype=complex)
        B = np.zeros((K, K), dtype=complex)
        Q = np.zeros((M + K, M + K), dtype=complex)
        Lam = np.zeros_like(Q)
        H = V.copy()
    else:
        a, B, Q, Lam, H = (x.copy() for x in (state.a, state.B, state.Q, state.Lambda, state.H))
    shift = weight / (2.0 * rho)
    eyeK = np.eye(K)
    trace = []
    converged = False
    for _ in range(controls.max_iters):
        Xi = Q + Lam
        a = _subdiagonal_means(Xi[:M, :M])
        a[0] = a[0].real - shift
        B = Xi[M:, M:] - shift * eyeK
        B = (B + B.conj().T) / 2.0
        if solve_h:
            H = (V + 2.0 * rho * Xi[:M, M:]) / (1.0 + 2.0 * rho)
        Theta = np.block([[toeplitz_hermitian(a), H], [H.conj().T, B]])
        Q_new = _psd_project(Theta - Lam)
        Lam = Lam + Q_new - Theta
        primal = np.linalg.norm(Q_new - Theta) / max(1.0, np.linalg.norm(Theta))
        dual = rho * np.linalg.norm(Q_new - Q) / max(1.0, np.linalg.norm(Q))
        Q = Q_new
        value = 0.5 * (M * a[0].real + np.trace(B).real)
        obj = weight * value
        if solve_h:
            obj += 0.5 * np.linalg.norm(H - V) ** 2
        trace.append(obj)
        if primal <= controls.tol_primal and dual <= controls.tol_dual:
            converged = True
            break
    final = SdpState(a=a, B=B, Q=Q, Lambda=Lam, H=H)
    value = 0.5 * (M * a[0].real + np.trace(B).real)
    return H, value, np.asarray(trace), converged, final


def prox_atomic_sdp(
    V: np.ndarray,
    t: float,
    controls: AdmmControls | None = None,
    state: SdpState | None = None,
) -> SdpProxResult:
    """Prox of t * (steering-atom norm) at V, solved by consensus ADMM.

    Every iteration costs one Hermitian eigendecomposition of the
    (M+K) x (M+K) block matrix. Pass the returned ``state`` back in to warm
    start repeated solves at the same threshold.
    """
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    V = np.asarray(V, dtype=complex)
    if t == 0:
        return SdpProxResult(H=V.copy(), objective_trace=np.zeros(0), converged=True,
                             norm_value=0.0, state=None)
    controls = controls or AdmmControls()
    H, value, trace, converged, final = _atomic_sdp_admm(V, t, controls, state, solve_h=True)
    return SdpProxResult(H=H, objective_trace=trace, converged=converged,
                         norm_value=value, state=final)


def atomic_norm_sdp(H: np.ndarray, controls: AdmmControls | None = None) -> float:
    """Steering-atom norm of H through its SDP characterization.

    Normalized so a single unit-Frobenius atom has norm 1.
    """
    H = np.asarray(H, dtype=complex)
    if not np.any(H):
        return 0.0
    controls = controls or AdmmControls(max_iters=4000, tol_primal=1e-8, tol_dual=1e-8)
    _, value, _, _, _ = _atomic_sdp_admm(H, 1.0, controls, None, solve_h=False)
    return float(value)


# ---------------------------------------------------------------------------
# gridded atom set: partial-DFT operator and group lasso
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridOperator:
    """First M rows of the unitary-scaled N-point DFT, applied via FFTs.

    Columns are the N on-grid atoms' steering parts (1/sqrt(M)) a(i/N); each
    column has unit norm and forward @ adjoint = (N/M) I.
    """

    M: int
    N: int

    def __post_init__(self):
        if self.N < self.M:
            raise ValueError(f"grid size N={self.N} must be >= M={self.M}")

    def forward(self, G: np.ndarray) -> np.ndarray:
        """(N, K) -> (M, K) synthesis."""
        return (self.N / math.sqrt(self.M)) * np.fft.ifft(G, axis=0)[: self.M]

    def adjoint(self, R: np.ndarray) -> np.ndarray:
        """(M, K) -> (N, K) analysis (zero-padded)."""
        return np.fft.fft(R, n=self.N, axis=0) / math.sqrt(self.M)

    def dense(self) -> np.ndarray:
        """Explicit M x N matrix; for tests and small problems only."""
        m = np.arange(self.M)[:, None]
        i = np.arange(self.N)[None, :]
        return np.exp(2j * np.pi * m * i / self.N) / math.sqrt(self.M)


@dataclass
class GridProxResult:
    H: np.ndarray
    Gbar: np.ndarray
    objective_trace: np.ndarray
    converged: bool
    state: np.ndarray    # final coefficients, reusable as a warm start


def prox_atomic_grid(
    V: np.ndarray,
    t: float,
    op: GridOperator,
    controls: AdmmControls | None = None,
    state: np.ndarray | None = None,
) -> GridProxResult:
    """Gridded-atom prox via group lasso, solved by accelerated proximal gradient.

    Minimizes t ||G||_{2,1} + (1/2)||op.forward(G) - V||_F^2 with step size
    M/N (the quadratic's Lipschitz constant is N/M) and restarts the momentum
    whenever the objective increases. Returns H = op.forward(G).
    """
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    V = np.asarray(V, dtype=complex)
    if op.M != V.shape[0]:
        raise ValueError(f"operator rows {op.M} != input rows {V.shape[0]}")
    controls = controls or AdmmControls(max_iters=500)
    step = op.M / op.N
    G = np.zeros((op.N, V.shape[1]), dtype=complex) if state is None else state.astype(complex).copy()
    Gy = G.copy()
    tk = 1.0
    prev_obj = np.inf
    trace = []
    converged = False
    for _ in range(controls.max_iters):
        resid = op.forward(Gy) - V
        G_new = prox_row_l21(Gy - step * op.adjoint(resid), t * step)
        obj = t * l21_norm(G_new) + 0.5 * np.linalg.norm(op.forward(G_new) - V) ** 2
        trace.append(obj)
        if obj > prev_obj:
            tk = 1.0                      # adaptive restart
        prev_obj = obj
        tk_next = (1.0 + math.sqrt(1.0 + 4.0 * tk * tk)) / 2.0
        Gy = G_new + ((tk - 1.0) / tk_next) * (G_new - G)
        delta = np.linalg.norm(G_new - G) / max(1.0, np.linalg.norm(G_new))
        G = G_new
        tk = tk_next
        if delta <= controls.tol_primal:
            converged = True
            break
    H = op.forward(G)
    return GridProxResult(H=H, Gbar=G, objective_trace=np.asarray(trace),
                          converged=converged, state=G)


def gridded_atomic_norm(H: np.ndarray, op: GridOperator,
                        controls: AdmmControls | None = None) -> float:
    """Gridded-atom norm: min ||G||_{2,1} subject to op.forward(G) = H.

    Solved by ADMM; the affine projection is closed-form because
    forward @ adjoint = (N/M) I. The returned value is evaluated on the
    feasible iterate, so it upper-bounds the true optimum at any iteration.
    """
    H = np.asarray(H, dtype=complex)
    if op.M != H.shape[0]:
        raise ValueError(f"operator rows {op.M} != input rows {H.shape[0]}")
    if not np.any(H):
        return 0.0
    controls = controls or AdmmControls(max_iters=4000, tol_primal=1e-9, tol_dual=1e-9)
    rho = controls.penalty
    back = op.M / op.N
    G = back * op.adjoint(H)              # minimum-norm feasible point
    Z = G.copy()
    U = np.zeros_like(G)
    converged = False
    for _ in range(controls.max_iters):
        W = Z - U
        G = W - back * op.adjoint(op.forward(W) - H)
        Z_new = prox_row_l21(G + U, 1.0 / rho)
        U = U + G - Z_new
        primal = np.linalg.norm(G - Z_new) / max(1.0, np.linalg.norm(G))
        dual = rho * np.linalg.norm(Z_new - Z) / max(1.0, np.linalg.norm(Z))
        Z = Z_new
        if primal <= controls.tol_primal and dual <= controls.tol_dual:
            converged = True
            break
    return l21_norm(G)


def dual_atomic_norm(V: np.ndarray, fineness: int | None = None) -> float:
    """Dual of the steering-atom norm, evaluated on a fine frequency grid.

    Maximizes sqrt(sum_k |v_k(f)|^2) over the grid via one zero-padded FFT;
    the result never exceeds the continuous supremum, and equals the exact
    dual norm of the matching gridded atom set.
    """
    V = np.asarray(V, dtype=complex)
    M = V.shape[0]
    if fineness is None:
        fineness = 16 * M
    if fineness < 4 * M:
        raise ValueError(f"fineness {fineness} too coarse; need >= {4 * M}")
    spectrum = np.fft.fft(V, n=fineness, axis=0)
    power = (np.abs(spectrum) ** 2).sum(axis=1) / M
    return float(np.sqrt(power.max()))
