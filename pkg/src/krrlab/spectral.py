"""Spectral quantities behind the variance bounds.

The central object is the quantity

    N(spectrum, b) = sum_i  l_i / (b + l_i)^2,

evaluated on the eigenvalues of X~ = beta XX^T/d + alpha 11^T with
b = n*lambda + gamma.  Closed-form upper bounds exist for three parametric
eigenvalue decays (harmonic n/i, polynomial n i^{-2a}, exponential
n e^{-ai}), together with peak-location formulas for the resulting
variance curves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.integrate

__all__ = [
    "Spectrum",
    "DecaySpec",
    "generate_decay_spectrum",
    "quantity_N",
    "effective_dimension",
    "bound_N",
    "peak_point",
    "numeric_peak",
    "exp_monotone_condition",
    "harmonic_theta_threshold",
    "polynomial_theta_threshold",
]

DECAY_KINDS = ("harmonic", "polynomial", "exponential")


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted descending, all >= 0."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if not np.all(np.isfinite(v)):
            raise ValueError("spectrum contains non-finite entries")
        if np.any(v < 0):
            raise ValueError("spectrum contains negative entries")
        if np.any(np.diff(v) > 0):
            raise ValueError("spectrum must be sorted descending")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.shape[0]


def _values(spec) -> np.ndarray:
    if isinstance(spec, Spectrum):
        return spec.values
    return Spectrum(np.asarray(spec)).values


@dataclass(frozen=True)
class DecaySpec:
    """Parametric eigenvalue decay: harmonic n/i, polynomial n i^{-2a},
    or exponential n e^{-ai}, truncated at rank r_star."""

    kind: str
    a: float = 1.0
    r_star: int = 1

    def __post_init__(self):
        if self.kind not in DECAY_KINDS:
            raise ValueError(f"unknown decay kind {self.kind!r}")
        if self.r_star < 1:
            raise ValueError("r_star must be >= 1")
        if self.kind == "polynomial" and not self.a > 0.5:
            raise ValueError("polynomial decay requires a > 1/2")
        if self.kind == "exponential" and not self.a > 0:
            raise ValueError("exponential decay requires a > 0")


def generate_decay_spectrum(decay: DecaySpec, n: int) -> Spectrum:
    """Length-n spectrum with l_i per the decay for i <= r_star, 0 beyond.

    If n < r_star the rank is soft-capped at n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    r = min(decay.r_star, n)
    i = np.arange(1, r + 1, dtype=float)
    if decay.kind == "harmonic":
        head = n / i
    elif decay.kind == "polynomial":
        head = n * i ** (-2.0 * decay.a)
    else:
        head = n * np.exp(-decay.a * i)
    out = np.zeros(n)
    out[:r] = head
    return Spectrum(out)


def quantity_N(spec, b: float) -> float:
    """sum_i l_i / (b + l_i)^2, equal to tr((M + bI)^{-2} M) on eigenvalues of M."""
    if not b > 0:
        raise ValueError("b must be > 0")
    v = _values(spec)
    v = v[v > 0]           # zero eigenvalues contribute nothing
    return float(np.sum(v / (b + v) ** 2))


def effective_dimension(spec, lam: float) -> float:
    """sum_i l_i / (l_i + lam); lies in [0, number of nonzero eigenvalues]."""
    if not lam > 0:
        raise ValueError("lam must be > 0")
    v = _values(spec)
    return float(np.sum(v / (v + lam)))


def _poly_bound_constant(a: float) -> float:
    """The integral of u^{1/(2a)} / (1+u)^2 over (0, inf), by adaptive quadrature."""
    s = 1.0 / (2.0 * a)
    val, _ = scipy.integrate.quad(lambda u: u ** s / (1.0 + u) ** 2, 0.0, np.inf,
                                  epsabs=1e-12, epsrel=1e-12, limit=200)
    return float(val)


def bound_N(decay: DecaySpec, n: int, b: float) -> float:
    """Closed-form upper bound on quantity_N for the given decay.

    harmonic:    (n/b^2) * ln((n + (r+1) b) / (n + b))
    polynomial:  C / (2 a b) * (n/b)^{1/(2a)},  C the exact integral constant
    exponential: (1/a) * (1/(b + n e^{-a(r+1)}) - 1/(b + n e^{-a}))
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not b > 0:
        raise ValueError("b must be > 0")
    r = decay.r_star
    if decay.kind == "harmonic":
        return float(n / b ** 2 * np.log((n + (r + 1) * b) / (n + b)))
    if decay.kind == "polynomial":
        c = _poly_bound_constant(decay.a)
        return float(c / (2.0 * decay.a * b) * (n / b) ** (1.0 / (2.0 * decay.a)))
    return float((1.0 / decay.a)
                 * (1.0 / (b + n * np.exp(-decay.a * (r + 1)))
                    - 1.0 / (b + n * np.exp(-decay.a))))


def harmonic_theta_threshold(cbar: float) -> float:
    """Schedule exponent above which the harmonic-decay variance bound has no
    interior peak: theta >= 1 / (2 (2 - cbar))."""
    return 1.0 / (2.0 * (2.0 - cbar))


def polynomial_theta_threshold(a: float) -> float:
    """Polynomial-decay analogue: theta >= 1 / (1 + 1/(2a))."""
    return 1.0 / (1.0 + 1.0 / (2.0 * a))


def peak_point(decay: DecaySpec, cbar: float, theta: float, gamma: float) -> float:
    """Closed-form peak location n_* of the variance bound curve.

    harmonic:    (gamma / (2 - 2 theta - cbar))^{1/(1-theta)}
    polynomial:  (gamma / (2 a cbar (1 - (1 + 1/(2a)) theta)))^{1/(1-theta)}

    No closed form exists for exponential decay; use `numeric_peak`.
    """
    if decay.kind == "exponential":
        raise ValueError("exponential decay has no closed-form peak; use numeric_peak")
    if not 0 <= theta < 1:
        raise ValueError("theta must lie in [0, 1)")
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    if decay.kind == "harmonic":
        den = 2.0 - 2.0 * theta - cbar
        if den <= 0:
            raise ValueError(
                f"out of regime: 2 - 2*theta - cbar = {den:.3e} <= 0 "
                "(no interior peak for this schedule)")
        return float((gamma / den) ** (1.0 / (1.0 - theta)))
    den = 2.0 * decay.a * cbar * (1.0 - (1.0 + 1.0 / (2.0 * decay.a)) * theta)
    if den <= 0:
        raise ValueError(
            f"out of regime: polynomial peak denominator {den:.3e} <= 0")
    return float((gamma / den) ** (1.0 / (1.0 - theta)))


def numeric_peak(decay: DecaySpec, n_grid, d: int, cbar: float, theta: float,
                 gamma: float, beta: float, sigma: float):
    """Grid argmax of the variance-bound curve V1(n) = sigma^2 beta/d * N(b(n)).

    Uses the exact decay spectrum at each n (rank capped at min(r_star, n, d))
    with b(n) = n * cbar * n^{-theta} + gamma.  Ties break toward smaller n.
    Returns (n_at_max, max_value).
    """
    grid = [int(x) for x in n_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be nonempty and strictly increasing")
    best_n, best_v = grid[0], -np.inf
    for n in grid:
        b = n * cbar * float(n) ** (-theta) + gamma
        capped = DecaySpec(decay.kind, decay.a, min(decay.r_star, d))
        spec = generate_decay_spectrum(capped, n)
        v = sigma ** 2 * beta / d * quantity_N(spec, b) if sigma > 0 else 0.0
        if v > best_v:
            best_n, best_v = n, v
    return best_n, float(best_v)


def exp_monotone_condition(cbar: float, theta: float, gamma: float, a: float,
                           r_star: int) -> bool:
    """Sufficient condition for the exponential-decay variance bound to be
    monotone decreasing in n:

        (theta*cbar + gamma)^2 <= (e^{-a} + (1-theta) cbar)
                                  * (e^{-a(r*+1)} + (1-theta) cbar).
    """
    lhs = (theta * cbar + gamma) ** 2
    rhs = (np.exp(-a) + (1.0 - theta) * cbar) * (np.exp(-a * (r_star + 1)) + (1.0 - theta) * cbar)
    return bool(lhs <= rhs)
