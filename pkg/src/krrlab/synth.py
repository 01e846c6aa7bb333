"""Synthetic data with a prescribed covariance eigen-decay.

Samples follow x_i = Sigma^{1/2} t_i with diagonal Sigma whose entries decay
harmonically, polynomially, or exponentially, rescaled so tr(Sigma) = d
(hence tau = tr(Sigma)/d = 1).  For n <= d the rows t_i come from the QR
decomposition of a Gaussian matrix, scaled by sqrt(d) so entries have unit
empirical variance; for n > d exact row-orthogonality is impossible and rows
fall back to i.i.d. standard normals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .kernels import Dataset

__all__ = [
    "CovModel",
    "TargetSpec",
    "make_covariance",
    "random_orthogonal_rows",
    "sample_dataset",
    "sample_features",
    "evaluate_target",
]


@dataclass(frozen=True)
class CovModel:
    """Diagonal covariance with tr = d and entries sorted descending."""

    d: int
    kind: str
    a: Optional[float]
    diag: np.ndarray

    @property
    def tau(self) -> float:
        return float(self.diag.sum()) / self.d

    @property
    def trace_ratio(self) -> float:
        return float(np.sum(self.diag ** 2)) / self.d ** 2


def make_covariance(d: int, kind: str, a: Optional[float] = None) -> CovModel:
    """Diagonal covariance with the requested decay, normalized to tr = d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    i = np.arange(1, d + 1, dtype=float)
    if kind == "harmonic":
        base = 1.0 / i
    elif kind == "polynomial":
        if a is None or not a > 0.5:
            raise ValueError("polynomial decay requires a > 1/2")
        base = i ** (-2.0 * a)
    elif kind == "exponential":
        if a is None or not a > 0:
            raise ValueError("exponential decay requires a > 0")
        base = np.exp(-a * i)
    elif kind == "identity":
        base = np.ones(d)
    else:
        raise ValueError(f"unknown covariance kind {kind!r}")
    diag = base * (d / base.sum())
    return CovModel(d=d, kind=kind, a=a, diag=diag)


def _as_rng(seed: Union[int, list, np.random.Generator]) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_orthogonal_rows(n: int, d: int, seed) -> np.ndarray:
    """n x d matrix T with T T^T = d I (rows orthogonal, scaled by sqrt(d)).

    Built from the QR decomposition of a Gaussian d x n matrix with the sign
    convention fixed by the R diagonal, so output is a deterministic function
    of the seed.  For n > d, where row-orthogonality cannot hold, rows are
    i.i.d. standard normal.
    """
    rng = _as_rng(seed)
    if n <= d:
        G = rng.standard_normal((d, n))
        Q, R = np.linalg.qr(G)
        Q = Q * np.sign(np.diag(R))[None, :]
        return np.sqrt(d) * Q.T
    return rng.standard_normal((n, d))


@dataclass(frozen=True)
class TargetSpec:
    """Regression target plus homoskedastic Gaussian noise level."""

    kind: str = "sin_sqnorm"            # "sin_sqnorm" | "custom"
    noise_sigma: float = 1.0
    f: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.kind == "custom" and self.f is None:
            raise ValueError("custom target needs a callable f")
        if self.kind not in ("sin_sqnorm", "custom"):
            raise ValueError(f"unknown target kind {self.kind!r}")


def evaluate_target(target: TargetSpec, X: np.ndarray) -> np.ndarray:
    """Clean responses f(x_i) for the rows of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if target.kind == "sin_sqnorm":
        return np.sin(np.einsum("ij,ij->i", X, X))
    return np.asarray(target.f(X), dtype=float).ravel()


def sample_features(cov: CovModel, n: int, seed) -> np.ndarray:
    """n x d feature matrix X = T Sigma^{1/2} under the sampling protocol."""
    T = random_orthogonal_rows(n, cov.d, seed)
    return T * np.sqrt(cov.diag)[None, :]


def sample_dataset(cov: CovModel, n: int, target: TargetSpec, seed):
    """Draw a dataset; returns (Dataset, clean_responses).

    Noise draws consume the same generator after the features, so a fixed
    seed pins the whole dataset.
    """
    rng = _as_rng(seed)
    X = sample_features(cov, n, rng)
    clean = evaluate_target(target, X)
    y = clean + target.noise_sigma * rng.standard_normal(n)
    return Dataset(X, y), clean
