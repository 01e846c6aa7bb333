"""Experiment harness: configuration, risk-curve sweeps, eigenvalue
comparison, and curve-shape classification.

A sweep walks a grid of sample sizes; at each n it draws `trials`
independent datasets, fits the (true or linearized) kernel ridge estimator
under the schedule lambda = cbar * n^(-theta), and records the empirical
bias, variance and risk together with the evaluable bound curves.  All
Monte-Carlo expectations share one test sample per sweep (common random
numbers) and every (n, trial) cell carries its own seeded stream, so the
output is byte-identical across reruns.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.stats

from .errors import ConfigError
from .kernels import Dataset, KernelSpec, kernel_matrix
from .libsvm import parse_libsvm
from .linearize import (LinParams, build_lin_kernel, estimate_trace_ratio,
                        interlacing_check, linearize_params)
from .risk import (LinModel, MomentParams, bias_ref, bound_v1, bound_v2,
                   excess_risk_mc)
from .synth import (CovModel, TargetSpec, evaluate_target, make_covariance,
                    sample_dataset, sample_features)

__all__ = [
    "CurveShape",
    "ExperimentConfig",
    "RiskPoint",
    "EigComparison",
    "classify_curve",
    "run_sweep",
    "eig_compare",
    "kernel_by_name",
    "write_csv",
    "CSV_HEADER",
]

CSV_HEADER = "n,lambda,bias_emp,var_emp,risk_emp,v1_bound,v2_bound,bias_ref,stderr"

_KERNELS = ("linear", "polynomial", "exponential_inner", "gaussian")


def kernel_by_name(name: str, degree: int = 3) -> KernelSpec:
    if name == "linear":
        return KernelSpec.linear()
    if name == "polynomial":
        return KernelSpec.polynomial(degree)
    if name == "exponential_inner":
        return KernelSpec.exponential_inner()
    if name == "gaussian":
        return KernelSpec.gaussian()
    raise ConfigError(f"unknown kernel {name!r} (choose from {_KERNELS})")


class CurveShape(str, enum.Enum):
    MONOTONE_DECREASING = "monotone_decreasing"
    MONOTONE_INCREASING = "monotone_increasing"
    BELL = "bell"
    DOUBLE_DESCENT = "double_descent"
    FLAT = "flat"
    IRREGULAR = "irregular"


# Classifier constants: an extremum counts only with prominence >= 5% of the
# smoothed range; a relative range under 2% is flat.
_PROMINENCE_FRAC = 0.05
_FLAT_FRAC = 0.02


def _smooth3(values: np.ndarray) -> np.ndarray:
    # centered window-3 average on interior points; endpoints stay raw
    out = values.astype(float).copy()
    if len(values) >= 3:
        out[1:-1] = (values[:-2] + values[1:-1] + values[2:]) / 3.0
    return out


def classify_curve(values) -> CurveShape:
    """Classify a curve's shape after window-3 moving-average smoothing.

    Decisions use only relative prominences, so the result is invariant
    under positive rescaling of the values.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.shape[0] < 5:
        raise ValueError(f"need at least 5 points to classify, got {v.shape[0]}")
    s = _smooth3(v)
    spread = float(s.max() - s.min())
    scale = max(abs(float(s.max())), abs(float(s.min())), 1e-300)
    if spread < _FLAT_FRAC * scale:
        return CurveShape.FLAT
    prom = _PROMINENCE_FRAC * spread
    maxima, minima = [], []
    for i in range(1, len(s) - 1):
        if s[i] > s[i - 1] and s[i] > s[i + 1]:
            if min(s[i] - s[:i].min(), s[i] - s[i + 1:].min()) >= prom:
                maxima.append(i)
        elif s[i] < s[i - 1] and s[i] < s[i + 1]:
            if min(s[:i].max() - s[i], s[i + 1:].max() - s[i]) >= prom:
                minima.append(i)
    if not maxima and not minima:
        return (CurveShape.MONOTONE_DECREASING if s[-1] < s[0]
                else CurveShape.MONOTONE_INCREASING)
    if len(maxima) == 1 and not minima and s[-1] <= s[0]:
        return CurveShape.BELL
    if (len(maxima) == 1 and len(minima) == 1 and minima[0] < maxima[0]
            and s[-1] <= s[maxima[0]]):
        return CurveShape.DOUBLE_DESCENT
    return CurveShape.IRREGULAR


def parse_grid(text) -> list:
    """Grid from 'start:stop:step' (stop inclusive) or an explicit int list."""
    if isinstance(text, str):
        try:
            start, stop, step = (int(p) for p in text.split(":"))
        except ValueError:
            raise ConfigError(f"bad n_grid {text!r}, expected start:stop:step") from None
        if step < 1 or stop < start:
            raise ConfigError(f"bad n_grid {text!r}")
        grid = list(range(start, stop + 1, step))
    else:
        grid = [int(x) for x in text]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
        raise ConfigError("n_grid must be nonempty, positive, strictly increasing")
    return grid


@dataclass
class ExperimentConfig:
    """Everything one sweep needs; JSON-serializable, unknown keys rejected."""

    mode: str = "synth"                   # "synth" | "real"
    kernel: str = "gaussian"
    degree: int = 3
    use_linearized: bool = True
    lin_curvature: bool = False           # include the radial correction T in fits
    gamma_override: Optional[float] = None
    decay: str = "harmonic"
    a: Optional[float] = None
    d: int = 500
    n_grid: object = "100:1000:100"
    cbar: float = 0.01
    theta: float = 2.0 / 3.0
    fixed_lambda: Optional[float] = None  # n-independent ridge K + lambda I
    sigma: float = 1.0
    trials: int = 10
    seed: int = 0
    test_points: int = 2000
    noise_draws: int = 50
    source_r: float = 1.0                 # exponent of the bias reference curve
    standardize: bool = False             # real mode: per-feature z-score
    input_path: Optional[str] = None
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.mode not in ("synth", "real"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        kernel_by_name(self.kernel, self.degree)
        self.grid = parse_grid(self.n_grid)
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.mode == "real" and not self.input_path:
            raise ConfigError("real mode requires input_path")
        if self.sigma < 0:
            raise ConfigError("sigma must be >= 0")
        if not (0 <= self.theta <= 1 and 0 <= self.cbar <= 1):
            raise ConfigError("need 0 <= theta <= 1 and 0 <= cbar <= 1")
        if self.fixed_lambda is not None and self.fixed_lambda < 0:
            raise ConfigError("fixed_lambda must be >= 0")
        if self.mode == "synth" and self.decay not in ("harmonic", "polynomial",
                                                       "exponential", "identity"):
            raise ConfigError(f"unknown decay {self.decay!r}")

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ConfigError("config document must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)


@dataclass(frozen=True)
class RiskPoint:
    n: int
    lam: float
    bias_emp: float
    var_emp: float
    risk_emp: float
    v1_bound: float
    v2_bound: float
    bias_ref: float
    trial_count: int
    mc_stderr: float


def _fmt(x: float) -> str:
    return format(x, ".12g")


def write_csv(points, path: str) -> str:
    lines = [CSV_HEADER]
    for p in points:
        lines.append(",".join([str(p.n), _fmt(p.lam), _fmt(p.bias_emp), _fmt(p.var_emp),
                               _fmt(p.risk_emp), _fmt(p.v1_bound), _fmt(p.v2_bound),
                               _fmt(p.bias_ref), _fmt(p.mc_stderr)]))
    text = "\n".join(lines) + "\n"
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    return text


def _lin_params_for(config: ExperimentConfig, spec: KernelSpec, X: np.ndarray,
                    cov: Optional[CovModel]) -> LinParams:
    if cov is not None:
        return linearize_params(spec, cov.tau, cov.trace_ratio)
    tau = float(np.mean(np.einsum("ij,ij->i", X, X))) / X.shape[1]
    return linearize_params(spec, tau, estimate_trace_ratio(X))


def _model_for(config: ExperimentConfig, params: LinParams):
    if config.use_linearized:
        return LinModel(params, gamma_override=config.gamma_override,
                        curvature=config.lin_curvature)
    return kernel_by_name(config.kernel, config.degree)


def _gamma_eff(config: ExperimentConfig, params: LinParams) -> float:
    if config.use_linearized and config.gamma_override is not None:
        return float(config.gamma_override)
    return params.gamma


def _xtilde_spectrum(params: LinParams, X: np.ndarray) -> np.ndarray:
    n, d = X.shape
    M = params.beta * (X @ X.T) / d + params.alpha
    w = np.linalg.eigvalsh(M)[::-1]
    return np.maximum(w, 0.0)


def run_sweep(config: ExperimentConfig):
    """Run the sweep; returns (points, csv_text).  Writes the CSV if
    `config.output_path` is set."""
    spec = kernel_by_name(config.kernel, config.degree)
    moments = MomentParams()
    grid = config.grid

    if config.mode == "synth":
        cov = make_covariance(config.d, config.decay, config.a)
        target = TargetSpec(noise_sigma=config.sigma)
        rng_test = np.random.default_rng([config.seed, 7, 1])
        test_X = sample_features(cov, config.test_points, rng_test)
        clean_test = evaluate_target(target, test_X)
        pool = None
    else:
        full = parse_libsvm(config.input_path, config.d)
        X = full.features
        if config.standardize:
            mu = X.mean(axis=0)
            sd = X.std(axis=0, ddof=0)
            sd[sd == 0] = 1.0
            X = (X - mu) / sd
        pool = Dataset(X, full.responses)
        cov = None
        m_avail = pool.n - grid[-1]
        if m_avail < 100:
            raise ConfigError(
                f"real mode needs max(n_grid) + 100 <= rows; have {pool.n} rows, "
                f"max n {grid[-1]}")
        m_test = min(config.test_points, m_avail)

    points = []
    for n in grid:
        if config.fixed_lambda is not None:
            lam_user = config.fixed_lambda
            lam_solve = lam_user / n          # ridge n*lam_solve == lam_user
        else:
            lam_user = config.cbar * float(n) ** (-config.theta)
            lam_solve = lam_user
        bias_l, var_l, risk_l, v1_l, v2_l, stderr_sq = [], [], [], [], [], []
        for t in range(config.trials):
            rng = np.random.default_rng([config.seed, n, t])
            if config.mode == "synth":
                data, clean = sample_dataset(cov, n, target, rng)
                t_X, t_clean = test_X, clean_test
            else:
                # one shuffle per trial: training sets are nested prefixes and
                # the held-out tail is shared across the whole grid
                perm = np.random.default_rng([config.seed, 900, t]).permutation(pool.n)
                tr = perm[:n]
                te = perm[pool.n - m_test:]
                data = Dataset(pool.features[tr], pool.responses[tr])
                clean = data.responses
                t_X = pool.features[te]
                t_clean = pool.responses[te]
            params = _lin_params_for(config, spec, data.features, cov)
            model = _model_for(config, params)
            est = excess_risk_mc(data, clean, model, lam_solve, config.sigma,
                                 t_X, t_clean, config.noise_draws, rng)
            gamma_eff = _gamma_eff(config, params)
            v1 = bound_v1(_xtilde_spectrum(params, data.features), params.beta,
                          data.d, n, lam_solve, gamma_eff, config.sigma)
            bias_l.append(est.bias)
            var_l.append(est.variance)
            risk_l.append(est.risk)
            v1_l.append(v1)
            v2_l.append(bound_v2(spec.family, n, lam_solve, gamma_eff, config.d,
                                 moments, config.sigma))
            stderr_sq.append(est.mc_stderr ** 2)
        ref = bias_ref(n, config.theta if config.fixed_lambda is None else 0.0,
                       config.source_r)
        points.append(RiskPoint(
            n=n, lam=lam_user,
            bias_emp=float(np.mean(bias_l)),
            var_emp=float(np.mean(var_l)),
            risk_emp=float(np.mean(risk_l)),
            v1_bound=float(np.mean(v1_l)),
            v2_bound=float(np.mean(v2_l)),
            bias_ref=float(ref),
            trial_count=config.trials,
            mc_stderr=float(np.sqrt(np.mean(stderr_sq) / config.trials)),
        ))
    csv_text = write_csv(points, config.output_path)
    return points, csv_text


@dataclass(frozen=True)
class EigComparison:
    ranks: np.ndarray
    eig_true: np.ndarray
    eig_lin: np.ndarray
    eig_scaled_gram: np.ndarray
    interlacing_violations: int
    interlacing_max_violation: float
    spearman_beyond_top5: float
    csv_text: str


def eig_compare(config: ExperimentConfig, n: Optional[int] = None, k: int = 60,
                output_path: Optional[str] = None) -> EigComparison:
    """Compare the top-k spectra of K, its full linearization, and the scaled
    Gram matrix beta * XX^T/d (+ gamma), with the interlacing report.

    The first eigenvalue is flagged in the CSV (column is_top1) since its
    scale is dominated by the rank-one mean component.
    """
    spec = kernel_by_name(config.kernel, config.degree)
    n = n if n is not None else config.grid[-1]
    rng = np.random.default_rng([config.seed, n, 0])
    if config.mode == "synth":
        cov = make_covariance(config.d, config.decay, config.a)
        data, _ = sample_dataset(cov, n, TargetSpec(noise_sigma=config.sigma), rng)
    else:
        full = parse_libsvm(config.input_path, config.d)
        perm = rng.permutation(full.n)
        data = Dataset(full.features[perm[:n]], full.responses[perm[:n]])
        cov = None
    params = _lin_params_for(config, spec, data.features, cov)
    gamma_eff = _gamma_eff(config, params)
    gamma_arg = config.gamma_override if config.use_linearized else None

    K = kernel_matrix(spec, data)
    lk = build_lin_kernel(params, data, gamma_arg)
    G = data.features @ data.features.T / data.d

    eig_true = np.linalg.eigvalsh(K)[::-1]
    eig_lin = np.linalg.eigvalsh(lk.matrix)[::-1]
    eig_g = np.linalg.eigvalsh((G + G.T) / 2.0)[::-1]

    start = 2 if spec.family == "inner_product" else 6
    report = interlacing_check(eig_lin, eig_g, params.beta, gamma_eff, start)
    rho = scipy.stats.spearmanr(eig_true[5:], eig_g[5:]).statistic

    k = min(k, n)
    lines = ["i,eig_true,eig_lin,eig_scaled_gram,is_top1"]
    for i in range(k):
        lines.append(",".join([str(i + 1), _fmt(eig_true[i]), _fmt(eig_lin[i]),
                               _fmt(params.beta * eig_g[i] + gamma_eff),
                               "1" if i == 0 else "0"]))
    csv_text = "\n".join(lines) + "\n"
    if output_path:
        with open(output_path, "w", encoding="ascii", newline="") as fh:
            fh.write(csv_text)
    return EigComparison(
        ranks=np.arange(1, k + 1),
        eig_true=eig_true[:k],
        eig_lin=eig_lin[:k],
        eig_scaled_gram=params.beta * eig_g[:k] + gamma_eff,
        interlacing_violations=len(report.violations),
        interlacing_max_violation=report.max_violation,
        spearman_beyond_top5=float(rho),
        csv_text=csv_text,
    )
