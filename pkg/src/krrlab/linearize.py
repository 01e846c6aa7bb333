"""High-dimensional linearization of kernel matrices.

For data with d large, an inner-product or radial kernel matrix is well
approximated in spectral norm by

    K_lin = alpha * 11^T + beta * X X^T / d + gamma * I + T,

where (alpha, beta, gamma) depend on the profile h evaluated at the pivot
(0 for inner-product kernels, 2*tau for radial ones, tau = tr(Sigma)/d),
and T is a curvature correction of rank <= 5 that is nonzero only for the
radial family:

    T = h'(2 tau) * A + h''(2 tau)/2 * (A ∘ A),   A = 1 psi^T + psi 1^T,

with psi_i = ||x_i||^2/d - tau.  gamma acts as an implicit ridge built into
the kernel curvature; `gamma_override` replaces it (typically with 0) to
study explicit regularization in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kernels import Dataset, KernelSpec

__all__ = [
    "LinParams",
    "LinKernel",
    "MomentDiagnostics",
    "linearize_params",
    "build_lin_kernel",
    "lin_cross_kernel",
    "lin_cross_kernel_matrix",
    "approx_error",
    "interlacing_check",
    "InterlacingReport",
    "moment_diagnostics",
    "estimate_trace_ratio",
]


@dataclass(frozen=True)
class LinParams:
    """Linearization coefficients of one kernel at a given pivot.

    `trace_ratio` is tr(Sigma^2)/d^2.  `h_pivot`, `h1_pivot`, `h2_pivot`
    hold h and its derivatives at the pivot (0 or 2*tau); they drive the
    curvature matrix T and the linearized cross kernel.
    """

    family: str
    alpha: float
    beta: float
    gamma: float
    tau: float
    trace_ratio: float
    h_pivot: float
    h1_pivot: float
    h2_pivot: float


def linearize_params(spec: KernelSpec, tau: float, trace_ratio: float) -> LinParams:
    """Coefficients (alpha, beta, gamma) of the high-dimensional linearization.

    Inner-product family (pivot 0):
        alpha = h(0) + h''(0) * trace_ratio / 2
        beta  = h'(0)
        gamma = h(tau) - h(0) - tau h'(0)
    Radial family (pivot 2*tau):
        alpha = h(2 tau) + 2 h''(2 tau) * trace_ratio
        beta  = -2 h'(2 tau)
        gamma = h(0) + 2 tau h'(2 tau) - h(2 tau)
    """
    if tau < 0 or trace_ratio < 0:
        raise ValueError("tau and trace_ratio must be >= 0")
    if spec.family == "inner_product":
        pivot = 0.0
        h0 = float(spec.h(np.float64(0.0)))
        h1 = float(spec.h1(pivot))
        h2 = float(spec.h2(pivot))
        alpha = h0 + h2 * trace_ratio / 2.0
        beta = h1
        gamma = float(spec.h(np.float64(tau))) - h0 - tau * h1
        h_pivot = h0
    else:
        pivot = 2.0 * tau
        hp = float(spec.h(np.float64(pivot)))
        h1 = float(spec.h1(pivot))
        h2 = float(spec.h2(pivot))
        alpha = hp + 2.0 * h2 * trace_ratio
        beta = -2.0 * h1
        gamma = float(spec.h(np.float64(0.0))) + 2.0 * tau * h1 - hp
        h_pivot = hp
    if beta <= 0:
        raise ValueError(f"linearization requires beta > 0, got {beta:.3e}")
    if gamma < 0 or alpha < 0:
        raise ValueError(
            f"linearization requires alpha, gamma >= 0, got alpha={alpha:.3e} "
            f"gamma={gamma:.3e}")
    return LinParams(spec.family, alpha, beta, gamma, float(tau), float(trace_ratio),
                     h_pivot, h1, h2)


@dataclass(frozen=True)
class LinKernel:
    """The assembled linearized kernel matrix, split into its pieces."""

    params: LinParams
    base: np.ndarray          # alpha 11^T + beta XX^T/d + gamma_eff I
    psi: np.ndarray           # ||x_i||^2/d - tau
    t_matrix: np.ndarray      # curvature correction (zero for inner products)
    gamma_eff: float

    @property
    def matrix(self) -> np.ndarray:
        return self.base + self.t_matrix


def build_lin_kernel(params: LinParams, data: Dataset,
                     gamma_override: Optional[float] = None) -> LinKernel:
    """Assemble K_lin = alpha 11^T + beta XX^T/d + gamma I + T on a dataset.

    `gamma_override`, when given, replaces the implicit ridge gamma (setting
    it to 0 removes the kernel-curvature regularization).
    """
    X = data.features
    n, d = X.shape
    gamma_eff = params.gamma if gamma_override is None else float(gamma_override)
    if gamma_eff < 0:
        raise ValueError("gamma_override must be >= 0")
    base = params.alpha + params.beta * (X @ X.T) / d
    base[np.diag_indices(n)] += gamma_eff
    psi = np.einsum("ij,ij->i", X, X) / d - params.tau
    if params.family == "radial":
        A = psi[:, None] + psi[None, :]
        T = params.h1_pivot * A + 0.5 * params.h2_pivot * (A * A)
    else:
        T = np.zeros((n, n))
    return LinKernel(params=params, base=base, psi=psi, t_matrix=T, gamma_eff=gamma_eff)


def lin_cross_kernel_matrix(params: LinParams, data: Dataset,
                            queries: np.ndarray) -> np.ndarray:
    """m x n linearized cross kernel.

    Inner-product: h(0) 1 + beta X q / d.  Radial additionally carries the
    first-order norm correction -beta/2 (psi_q + psi_i).
    """
    X = data.features
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    if Q.shape[1] != X.shape[1]:
        raise ValueError(f"queries have width {Q.shape[1]}, expected {X.shape[1]}")
    d = X.shape[1]
    out = params.h_pivot + params.beta * (Q @ X.T) / d
    if params.family == "radial":
        psi = np.einsum("ij,ij->i", X, X) / d - params.tau
        psi_q = np.einsum("ij,ij->i", Q, Q) / d - params.tau
        out -= 0.5 * params.beta * (psi_q[:, None] + psi[None, :])
    return out


def lin_cross_kernel(params: LinParams, data: Dataset, query: np.ndarray) -> np.ndarray:
    """n-vector form of the linearized cross kernel for one query point."""
    q = np.asarray(query, dtype=float).ravel()
    if q.shape[0] != data.d:
        raise ValueError(f"query has length {q.shape[0]}, expected {data.d}")
    return lin_cross_kernel_matrix(params, data, q[None, :])[0]


def approx_error(K: np.ndarray, K_lin: np.ndarray) -> float:
    """Spectral norm ||K - K_lin||_2 (symmetric eigendecomposition)."""
    K = np.asarray(K, dtype=float)
    K_lin = np.asarray(K_lin, dtype=float)
    if K.shape != K_lin.shape or K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"shape mismatch: {K.shape} vs {K_lin.shape}")
    D = K - K_lin
    D = (D + D.T) / 2.0
    w = np.linalg.eigvalsh(D)
    return float(max(abs(w[0]), abs(w[-1])))


@dataclass(frozen=True)
class InterlacingReport:
    violations: list
    max_violation: float

    @property
    def ok(self) -> bool:
        return not self.violations


def interlacing_check(eig_klin: np.ndarray, eig_xx: np.ndarray, beta: float,
                      gamma: float, start_index: int) -> InterlacingReport:
    """Check beta*l_i(XX^T/d) + gamma <= l_i(K_lin) <= beta*l_{i-1}(XX^T/d) + gamma.

    Both spectra must be sorted descending with equal length; indices are
    1-based and the check runs for i >= start_index (2 for inner-product
    kernels, 6 for radial ones where the top 5 are exempt).  Tolerance is
    1e-8 times the largest K_lin eigenvalue.
    """
    a = np.asarray(eig_klin, dtype=float).ravel()
    b = np.asarray(eig_xx, dtype=float).ravel()
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    if np.any(np.diff(a) > 0) or np.any(np.diff(b) > 0):
        raise ValueError("spectra must be sorted descending")
    n = a.shape[0]
    tol = 1e-8 * abs(a[0]) if n else 0.0
    violations = []
    worst = 0.0
    for i in range(start_index, n + 1):         # 1-based index
        lo = beta * b[i - 1] + gamma
        hi = beta * b[i - 2] + gamma if i >= 2 else np.inf
        v = a[i - 1]
        excess = max(lo - v, v - hi)
        if excess > tol:
            violations.append((i, float(lo), float(v), float(hi)))
            worst = max(worst, float(excess))
    return InterlacingReport(violations=violations, max_violation=worst)


def estimate_trace_ratio(X: np.ndarray) -> float:
    """Plug-in estimate of tr(Sigma^2)/d^2 from data with unknown covariance.

    Uses the bias-corrected tr(S^2) - (tr S)^2/n over the sample covariance
    S, clipped at zero.
    """
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    Xc = X - X.mean(axis=0, keepdims=True)
    G = Xc @ Xc.T / max(n - 1, 1)
    tr_s2 = float(np.sum(G * G))
    tr_s = float(np.trace(G))
    return max(tr_s2 - tr_s ** 2 / n, 0.0) / d ** 2


@dataclass(frozen=True)
class MomentDiagnostics:
    mu3_hat: float
    mu4_hat: float
    rank1_ratio: float
    top_eigenvalue: float


def moment_diagnostics(data: Dataset, queries: np.ndarray,
                       sigma_d: Optional[np.ndarray] = None) -> MomentDiagnostics:
    """Monte-Carlo diagnostics of the norm-fluctuation structure.

    Estimates E_x[A(x, X) A(X, x)] over the m query points, where
    A(x, X)_i = psi_x + psi_i, and reports the ratio of its second to first
    eigenvalue (near 0 when the estimate is close to rank one) together
    with empirical third/fourth moments of the whitened entries.
    """
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    m = Q.shape[0]
    if m < 100:
        raise ValueError(f"need at least 100 query points for the estimate, got {m}")
    if Q.shape[1] != data.d:
        raise ValueError(f"queries have width {Q.shape[1]}, expected {data.d}")
    X = data.features
    d = data.d
    if sigma_d is not None:
        diag = np.asarray(sigma_d, dtype=float).ravel()
        if diag.shape[0] != d or np.any(diag <= 0):
            raise ValueError("sigma_d must be a positive length-d diagonal")
        tau = float(diag.sum()) / d
        T_white = X / np.sqrt(diag)[None, :]
    else:
        tau = float(np.mean(np.einsum("ij,ij->i", X, X))) / d
        scale = X.std(axis=0, ddof=0)
        scale[scale == 0] = 1.0
        T_white = (X - X.mean(axis=0)) / scale[None, :]
    mu3 = float(np.mean(T_white ** 3))
    mu4 = float(np.mean(T_white ** 4))

    psi = np.einsum("ij,ij->i", X, X) / d - tau
    psi_q = np.einsum("ij,ij->i", Q, Q) / d - tau
    # (1/m) sum_q (psi_q 1 + psi)(psi_q 1 + psi)^T in closed form
    c1 = float(np.mean(psi_q))
    c2 = float(np.mean(psi_q ** 2))
    ones = np.ones(data.n)
    est = (c2 * np.outer(ones, ones)
           + c1 * (np.outer(ones, psi) + np.outer(psi, ones))
           + np.outer(psi, psi))
    w = np.linalg.eigvalsh(est)
    lam1 = float(w[-1])
    lam2 = float(w[-2]) if data.n >= 2 else 0.0
    ratio = abs(lam2) / lam1 if lam1 > 0 else 0.0
    return MomentDiagnostics(mu3_hat=mu3, mu4_hat=mu4, rank1_ratio=ratio,
                             top_eigenvalue=lam1)
