"""Kernel evaluation, Gram matrices, and the closed-form ridge estimator.

Two kernel families are supported, both driven by a scalar profile h:

* inner-product kernels   k(x, x') = h(<x, x'> / d)
* radial kernels          k(x, x') = h(||x - x'||^2 / d)

The ridge estimator solves (K + n*lambda*I) c = y and predicts with
k(x, X)^T c.  All arrays are dense float64.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import KernelEvaluationError, SingularKernelError

__all__ = [
    "Dataset",
    "KernelSpec",
    "KrrModel",
    "kernel_matrix",
    "cross_kernel",
    "cross_kernel_matrix",
    "krr_fit",
    "krr_predict",
    "solve_regularized",
]


@dataclass(frozen=True)
class Dataset:
    """An n x d feature matrix with an n-vector of responses."""

    features: np.ndarray
    responses: np.ndarray

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.features, dtype=float))
        y = np.asarray(self.responses, dtype=float).ravel()
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"features must be a nonempty 2-d matrix, got shape {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise ValueError(
                f"responses length {y.shape[0]} does not match {X.shape[0]} feature rows"
            )
        if not np.all(np.isfinite(X)):
            raise ValueError("features contain non-finite entries")
        if not np.all(np.isfinite(y)):
            raise ValueError("responses contain non-finite entries")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "responses", y)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family plus the nonlinearity profile h and its derivatives.

    Use the constructors (`linear`, `polynomial`, `exponential_inner`,
    `gaussian`, `custom`) rather than filling fields by hand.
    """

    family: str                     # "inner_product" | "radial"
    variant: str                    # "linear" | "polynomial" | ...
    degree: int = 0                 # polynomial only
    h: Callable[[np.ndarray], np.ndarray] = field(default=None, repr=False)
    h1: Callable[[float], float] = field(default=None, repr=False)
    h2: Callable[[float], float] = field(default=None, repr=False)

    def __post_init__(self):
        if self.family not in ("inner_product", "radial"):
            raise ValueError(f"unknown kernel family {self.family!r}")

    @staticmethod
    def linear() -> "KernelSpec":
        return KernelSpec("inner_product", "linear",
                          h=lambda t: np.asarray(t, dtype=float),
                          h1=lambda t: 1.0, h2=lambda t: 0.0)

    @staticmethod
    def polynomial(degree: int) -> "KernelSpec":
        p = int(degree)
        if p < 1:
            raise ValueError("polynomial degree must be >= 1")
        return KernelSpec(
            "inner_product", "polynomial", degree=p,
            h=lambda t, p=p: (1.0 + t) ** p,
            h1=lambda t, p=p: p * (1.0 + t) ** (p - 1),
            h2=lambda t, p=p: p * (p - 1) * (1.0 + t) ** (p - 2) if p >= 2 else 0.0,
        )

    @staticmethod
    def exponential_inner() -> "KernelSpec":
        return KernelSpec("inner_product", "exponential_inner",
                          h=lambda t: np.exp(2.0 * t),
                          h1=lambda t: 2.0 * np.exp(2.0 * t),
                          h2=lambda t: 4.0 * np.exp(2.0 * t))

    @staticmethod
    def gaussian() -> "KernelSpec":
        return KernelSpec("radial", "gaussian",
                          h=lambda t: np.exp(-np.asarray(t, dtype=float)),
                          h1=lambda t: -np.exp(-t),
                          h2=lambda t: np.exp(-t))

    @staticmethod
    def custom(family: str, h, h1, h2) -> "KernelSpec":
        return KernelSpec(family, "custom", h=h, h1=h1, h2=h2)

    def argument_matrix(self, X: np.ndarray, Q: Optional[np.ndarray] = None) -> np.ndarray:
        """Kernel argument <x,x'>/d or ||x-x'||^2/d for rows of Q against rows of X."""
        d = X.shape[1]
        if Q is None:
            Q = X
        G = Q @ X.T / d
        if self.family == "inner_product":
            return G
        sq_x = np.einsum("ij,ij->i", X, X) / d
        sq_q = np.einsum("ij,ij->i", Q, Q) / d
        D = sq_q[:, None] + sq_x[None, :] - 2.0 * G
        np.maximum(D, 0.0, out=D)
        return D


def kernel_matrix(spec: KernelSpec, data: Dataset) -> np.ndarray:
    """Gram matrix K[i, j] = k(x_i, x_j), exactly symmetric."""
    K = np.asarray(spec.h(spec.argument_matrix(data.features)), dtype=float)
    if not np.all(np.isfinite(K)):
        i, j = np.argwhere(~np.isfinite(K))[0]
        raise KernelEvaluationError(
            f"kernel evaluation produced a non-finite value at entry ({i}, {j})",
            int(i), int(j))
    # mirror the upper triangle so K is symmetric to the bit
    iu = np.triu_indices_from(K, k=1)
    K[(iu[1], iu[0])] = K[iu]
    return K


def cross_kernel_matrix(spec: KernelSpec, data: Dataset, queries: np.ndarray) -> np.ndarray:
    """m x n matrix of k(q_i, x_j) for query rows q_i."""
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    if Q.shape[1] != data.d:
        raise ValueError(f"queries have width {Q.shape[1]}, expected {data.d}")
    K = np.asarray(spec.h(spec.argument_matrix(data.features, Q)), dtype=float)
    if not np.all(np.isfinite(K)):
        i, j = np.argwhere(~np.isfinite(K))[0]
        raise KernelEvaluationError(
            f"cross-kernel evaluation produced a non-finite value at entry ({i}, {j})",
            int(i), int(j))
    return K


def cross_kernel(spec: KernelSpec, data: Dataset, query: np.ndarray) -> np.ndarray:
    """n-vector of k(query, x_i) for a single query point."""
    q = np.asarray(query, dtype=float).ravel()
    if q.shape[0] != data.d:
        raise ValueError(f"query has length {q.shape[0]}, expected {data.d}")
    return cross_kernel_matrix(spec, data, q[None, :])[0]


# Jitter policy: when the SPD factorization of K + n*lambda*I fails (the
# ridgeless limit with a near-singular Gram matrix), retry with a diagonal
# jitter of 1e-12 * tr(K)/n, escalating by x10 at most three times.
_JITTER_RELATIVE = 1e-12
_JITTER_ESCALATIONS = 3


def solve_regularized(K: np.ndarray, ridge: float, rhs: np.ndarray) -> np.ndarray:
    """Solve (K + ridge*I) sol = rhs by Cholesky with the jitter policy."""
    if ridge < 0:
        raise ValueError("ridge must be >= 0")
    n = K.shape[0]
    base = float(np.trace(K)) / n
    jitter = 0.0
    for attempt in range(_JITTER_ESCALATIONS + 1):
        try:
            cf = scipy.linalg.cho_factor(
                K + (ridge + jitter) * np.eye(n), lower=True, check_finite=False)
            return scipy.linalg.cho_solve(cf, rhs, check_finite=False)
        except scipy.linalg.LinAlgError:
            jitter = _JITTER_RELATIVE * max(abs(base), 1.0) * 10.0 ** attempt
    smallest = float(np.linalg.eigvalsh(K + ridge * np.eye(n))[0])
    raise SingularKernelError(
        f"system remained non-positive-definite after {_JITTER_ESCALATIONS} jitter "
        f"escalations (smallest eigenvalue {smallest:.3e})", smallest)


@dataclass(frozen=True)
class KrrModel:
    """Fitted ridge regressor: dual coefficients plus the training features."""

    spec: KernelSpec
    features: np.ndarray
    dual_coef: np.ndarray
    lam: float


def krr_fit(spec: KernelSpec, data: Dataset, lam: float) -> KrrModel:
    """Fit kernel ridge regression with penalty lam >= 0 (0 = interpolation)."""
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    K = kernel_matrix(spec, data)
    c = solve_regularized(K, data.n * lam, data.responses)
    return KrrModel(spec=spec, features=data.features, dual_coef=c, lam=float(lam))


def krr_predict(model: KrrModel, spec: KernelSpec, queries: np.ndarray) -> np.ndarray:
    """Predict at the rows of `queries` (m x d), linearly in the training responses."""
    Q = np.atleast_2d(np.asarray(queries, dtype=float))
    if Q.shape[1] != model.features.shape[1]:
        raise ValueError(f"queries have width {Q.shape[1]}, expected {model.features.shape[1]}")
    Kc = np.asarray(spec.h(spec.argument_matrix(model.features, Q)), dtype=float)
    return Kc @ model.dual_coef
