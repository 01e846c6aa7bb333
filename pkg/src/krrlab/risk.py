"""Exact bias-variance decomposition and the evaluable bound curves.

For the ridge estimator with system matrix M = K + n*lambda*I and test
points x drawn from the data distribution:

    bias     = E_x [ k(x,X)^T M^{-1} f(X) - f(x) ]^2
    variance = sigma^2 E_x || M^{-1} k(x,X) ||^2      (homoskedastic noise)
    risk     = bias + variance                        (exact identity)

Expectations over x are Monte-Carlo averages over a shared test sample.
The risk can also be estimated directly by averaging over fresh noise
draws; the gap to bias + variance is pure Monte-Carlo error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .kernels import Dataset, KernelSpec, kernel_matrix, cross_kernel_matrix, solve_regularized
from .linearize import LinParams, build_lin_kernel, lin_cross_kernel_matrix
from .spectral import Spectrum, quantity_N

__all__ = [
    "RegSchedule",
    "MomentParams",
    "RiskPoint",
    "RiskEstimate",
    "LinModel",
    "KernelModel",
    "schedule_lambda",
    "gram_and_cross",
    "empirical_bias",
    "empirical_variance",
    "excess_risk_mc",
    "bound_v1",
    "bound_v2",
    "bias_ref",
]


@dataclass(frozen=True)
class RegSchedule:
    """Regularization schedule lambda = cbar * n^(-theta)."""

    cbar: float
    theta: float
    eta: Optional[float] = None      # capacity exponent, validation only

    def __post_init__(self):
        if not 0 <= self.cbar <= 1:
            raise ValueError("cbar must lie in [0, 1]")
        if not 0 <= self.theta <= 1:
            raise ValueError("theta must lie in [0, 1]")
        if self.eta is not None:
            if not 0 <= self.eta <= 1:
                raise ValueError("eta must lie in [0, 1]")
            if self.theta > 1.0 / (1.0 + self.eta) + 1e-12:
                raise ValueError(
                    f"theta={self.theta} exceeds admissible 1/(1+eta)={1/(1+self.eta):.4f}")


def schedule_lambda(sched: RegSchedule, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(sched.cbar * float(n) ** (-sched.theta))


@dataclass(frozen=True)
class MomentParams:
    """Moment-order surplus m of the entry distribution, with log-slack epsilon."""

    m: float = 8.0
    epsilon: float = 0.01

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError("m must be > 0")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")

    @property
    def theta_moment(self) -> float:
        return 0.5 - 2.0 / (8.0 + self.m)


@dataclass(frozen=True)
class LinModel:
    """Linearized-kernel regression model used by the risk sweeps.

    When `curvature` is False (the default for risk-curve experiments) the
    Gram matrix is the rank-structured core alpha 11^T + beta XX^T/d +
    gamma_eff I and the cross kernel is its bilinear form h_pivot + beta
    <x, x_i>/d; this matrix is positive semi-definite for every sample.
    With `curvature` True the full construction including the radial
    correction T is used (T is indefinite, so a gamma override of 0 can
    make the system singular at isolated sample sizes).
    """

    params: LinParams
    gamma_override: Optional[float] = None
    curvature: bool = False


KernelModel = Union[KernelSpec, LinModel]


def gram_and_cross(model: KernelModel, data: Dataset, queries: np.ndarray):
    """Gram matrix on `data` and m x n cross kernel against `queries`."""
    if isinstance(model, KernelSpec):
        return kernel_matrix(model, data), cross_kernel_matrix(model, data, queries)
    lk = build_lin_kernel(model.params, data, model.gamma_override)
    if model.curvature:
        return lk.matrix, lin_cross_kernel_matrix(model.params, data, queries)
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    cross = model.params.h_pivot + model.params.beta * (Q @ data.features.T) / data.d
    return lk.base, cross


def _check_test_points(test_points: np.ndarray, d: int) -> np.ndarray:
    Q = np.atleast_2d(np.asarray(test_points, dtype=float))
    if Q.shape[0] < 100:
        raise ValueError(f"need at least 100 test points, got {Q.shape[0]}")
    if Q.shape[1] != d:
        raise ValueError(f"test points have width {Q.shape[1]}, expected {d}")
    return Q


def empirical_bias(data: Dataset, clean: np.ndarray, model: KernelModel, lam: float,
                   test_points: np.ndarray, clean_test: np.ndarray) -> float:
    """Monte-Carlo estimate of the squared bias over the test sample."""
    Q = _check_test_points(test_points, data.d)
    K, cross = gram_and_cross(model, data, Q)
    coef = solve_regularized(K, data.n * lam, np.asarray(clean, dtype=float))
    pred = cross @ coef
    return float(np.mean((pred - np.asarray(clean_test, dtype=float)) ** 2))


def empirical_variance(data: Dataset, model: KernelModel, lam: float, sigma: float,
                       test_points: np.ndarray) -> float:
    """sigma^2 * E_x ||(K + n lam I)^{-1} k(x, X)||^2 over the test sample."""
    if sigma == 0:
        return 0.0
    Q = _check_test_points(test_points, data.d)
    K, cross = gram_and_cross(model, data, Q)
    sol = solve_regularized(K, data.n * lam, cross.T)        # n x m
    return float(sigma ** 2 * np.mean(np.sum(sol ** 2, axis=0)))


@dataclass(frozen=True)
class RiskEstimate:
    risk: float
    bias: float
    variance: float
    mc_stderr: float


def excess_risk_mc(data: Dataset, clean: np.ndarray, model: KernelModel, lam: float,
                   sigma: float, test_points: np.ndarray, clean_test: np.ndarray,
                   noise_draws: int, seed) -> RiskEstimate:
    """Estimate risk by averaging over fresh noise draws; also return the
    analytic bias and variance.  risk - bias - variance is pure MC error,
    with its standard error reported in `mc_stderr`."""
    if noise_draws < 2:
        raise ValueError("noise_draws must be >= 2")
    Q = _check_test_points(test_points, data.d)
    clean = np.asarray(clean, dtype=float)
    clean_test = np.asarray(clean_test, dtype=float)
    K, cross = gram_and_cross(model, data, Q)
    ridge = data.n * lam

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    eps = sigma * rng.standard_normal((data.n, noise_draws))
    rhs = np.concatenate([clean[:, None], eps, cross.T], axis=1)
    sol = solve_regularized(K, ridge, rhs)
    coef_clean = sol[:, 0]
    coef_eps = sol[:, 1:1 + noise_draws]
    minv_cross = sol[:, 1 + noise_draws:]                    # n x m

    pred_clean = cross @ coef_clean
    bias = float(np.mean((pred_clean - clean_test) ** 2))
    variance = float(sigma ** 2 * np.mean(np.sum(minv_cross ** 2, axis=0)))

    resid = (pred_clean - clean_test)[:, None] + cross @ coef_eps   # m x draws
    per_draw = np.mean(resid ** 2, axis=0)
    risk = float(np.mean(per_draw))
    stderr = float(np.std(per_draw, ddof=1) / np.sqrt(noise_draws))
    return RiskEstimate(risk=risk, bias=bias, variance=variance, mc_stderr=stderr)


def bound_v1(spec: Union[Spectrum, np.ndarray], beta: float, d: int, n: int,
             lam: float, gamma: float, sigma: float) -> float:
    """Variance bound V1 = sigma^2 * beta / d * N(spectrum, n*lam + gamma)."""
    if sigma == 0:
        return 0.0
    b = n * lam + gamma
    if not b > 0:
        raise ValueError("n*lam + gamma must be > 0")
    return float(sigma ** 2 * beta / d * quantity_N(spec, b))


def bound_v2(family: str, n: int, lam: float, gamma: float, d: int,
             moments: MomentParams, sigma: float) -> float:
    """Residual variance term V2 (shape curve; constants set to 1).

    inner-product: sigma^2 log^{2+4eps} d / ((n lam + gamma)^2 d^{4 theta - 1})
    radial:        sigma^2 d^{-2 theta} log^{1+eps} d / (n lam + gamma)^2
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if sigma == 0:
        return 0.0
    b = n * lam + gamma
    if not b > 0:
        raise ValueError("n*lam + gamma must be > 0")
    th = moments.theta_moment
    logd = np.log(d)
    if family == "inner_product":
        return float(sigma ** 2 * logd ** (2 + 4 * moments.epsilon)
                     / (b ** 2 * d ** (4 * th - 1)))
    if family == "radial":
        return float(sigma ** 2 * d ** (-2 * th) * logd ** (1 + moments.epsilon) / b ** 2)
    raise ValueError(f"unknown kernel family {family!r}")


def bias_ref(n: int, theta: float, r: float) -> float:
    """Reference bias decay curve n^(-2 theta r)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 < r <= 1:
        raise ValueError("r must lie in (0, 1]")
    return float(float(n) ** (-2.0 * theta * r))
