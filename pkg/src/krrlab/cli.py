"""Command-line harness.

Subcommands: synth (generate a dataset, export libsvm), sweep (risk-curve
experiment, CSV output), eig-compare (spectra of K vs its linearization),
bounds (print the closed-form bound values for given parameters), plot
(CSV columns -> SVG).  `--config path.json` overrides flags.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import ConfigError, DataFormatError, NumericalError
from .libsvm import export_libsvm
from .spectral import (DecaySpec, bound_N, exp_monotone_condition,
                       generate_decay_spectrum, numeric_peak, peak_point,
                       quantity_N)
from .svgplot import emit_plot
from .sweep import ExperimentConfig, classify_curve, eig_compare, run_sweep
from .synth import TargetSpec, make_covariance, sample_dataset

__all__ = ["main"]


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config; overrides all other flags")
    p.add_argument("--mode", choices=["synth", "real"], default="synth")
    p.add_argument("--kernel", default="gaussian",
                   choices=["linear", "polynomial", "exponential_inner", "gaussian"])
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--true-kernel", action="store_true",
                   help="fit the exact kernel instead of its linearization")
    p.add_argument("--lin-curvature", action="store_true",
                   help="include the radial curvature matrix T in linearized fits")
    p.add_argument("--gamma-override", type=float, default=None)
    p.add_argument("--decay", default="harmonic",
                   choices=["harmonic", "polynomial", "exponential", "identity"])
    p.add_argument("--a", type=float, default=None, help="decay parameter")
    p.add_argument("--d", type=int, default=500)
    p.add_argument("--n-grid", default="100:1000:100")
    p.add_argument("--cbar", type=float, default=0.01)
    p.add_argument("--theta", type=float, default=2.0 / 3.0)
    p.add_argument("--fixed-lambda", type=float, default=None,
                   help="n-independent ridge: solve (K + lambda I) instead of the schedule")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--test-points", type=int, default=2000)
    p.add_argument("--noise-draws", type=int, default=50)
    p.add_argument("--source-r", type=float, default=1.0)
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--input", dest="input_path", default=None)
    p.add_argument("--out", dest="output_path", default=None)


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        return ExperimentConfig.from_json(args.config)
    return ExperimentConfig(
        mode=args.mode, kernel=args.kernel, degree=args.degree,
        use_linearized=not args.true_kernel, lin_curvature=args.lin_curvature,
        gamma_override=args.gamma_override, decay=args.decay, a=args.a, d=args.d,
        n_grid=args.n_grid, cbar=args.cbar, theta=args.theta,
        fixed_lambda=args.fixed_lambda, sigma=args.sigma, trials=args.trials,
        seed=args.seed, test_points=args.test_points, noise_draws=args.noise_draws,
        source_r=args.source_r, standardize=args.standardize,
        input_path=args.input_path, output_path=args.output_path)


def _cmd_synth(args) -> int:
    cov = make_covariance(args.d, args.decay, args.a)
    target = TargetSpec(noise_sigma=args.sigma)
    data, _ = sample_dataset(cov, args.n, target, args.seed)
    export_libsvm(data, args.out)
    print(f"wrote {data.n} x {data.d} dataset to {args.out} "
          f"(decay={args.decay}, tau={cov.tau:g})")
    return 0


def _cmd_sweep(args) -> int:
    config = _config_from_args(args)
    points, _ = run_sweep(config)
    if len(points) >= 5:
        var_shape = classify_curve([p.var_emp for p in points]).value
        risk_shape = classify_curve([p.risk_emp for p in points]).value
    else:
        var_shape = risk_shape = "n/a (grid too short)"
    dest = config.output_path or "(not written)"
    print(f"sweep done: {len(points)} grid points, variance {var_shape}, "
          f"risk {risk_shape}, csv {dest}")
    return 0


def _cmd_eig_compare(args) -> int:
    config = _config_from_args(args)
    res = eig_compare(config, n=args.n, k=args.k, output_path=args.eig_out)
    print(f"eig-compare: interlacing violations={res.interlacing_violations} "
          f"(max {res.interlacing_max_violation:.3e}), "
          f"spearman beyond top 5 = {res.spearman_beyond_top5:.5f}")
    if args.eig_out:
        print(f"csv {args.eig_out}")
    return 0


def _cmd_bounds(args) -> int:
    decay = DecaySpec(args.decay, args.a, args.rstar)
    b = args.n * args.cbar * args.n ** (-args.theta) + args.gamma
    exact = quantity_N(generate_decay_spectrum(decay, args.n), b)
    bnd = bound_N(decay, args.n, b)
    print(f"b = n*lambda + gamma = {b:.6g}")
    print(f"exact N = {exact:.6g}")
    print(f"bound N = {bnd:.6g}")
    if decay.kind in ("harmonic", "polynomial"):
        try:
            ns = peak_point(decay, args.cbar, args.theta, args.gamma)
            print(f"peak n_* = {ns:.6g}")
        except ValueError as exc:
            print(f"peak n_*: {exc}")
    grid = list(range(max(args.n // 10, 1), args.n + 1, max(args.n // 10, 1)))
    n_at, vmax = numeric_peak(decay, grid, args.d, args.cbar, args.theta,
                              args.gamma, args.beta, args.sigma)
    print(f"numeric peak over 10-point grid: n={n_at}, V1={vmax:.6g}")
    if decay.kind == "exponential":
        cond = exp_monotone_condition(args.cbar, args.theta, args.gamma, args.a,
                                      args.rstar)
        print(f"monotone-decrease condition: {cond}")
    return 0


def _cmd_plot(args) -> int:
    emit_plot(args.csv, args.columns.split(","), args.out)
    print(f"wrote {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="krrlab", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset as libsvm")
    p.add_argument("--d", type=int, default=500)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--decay", default="harmonic",
                   choices=["harmonic", "polynomial", "exponential", "identity"])
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("sweep", help="risk-curve sweep over a sample-size grid")
    _add_sweep_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("eig-compare", help="spectra of K vs its linearization")
    _add_sweep_flags(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=60)
    p.add_argument("--eig-out", default=None)
    p.set_defaults(func=_cmd_eig_compare)

    p = sub.add_parser("bounds", help="print spectral bound values")
    p.add_argument("--decay", required=True,
                   choices=["harmonic", "polynomial", "exponential"])
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--rstar", type=int, default=100)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--d", type=int, default=500)
    p.add_argument("--cbar", type=float, default=0.01)
    p.add_argument("--theta", type=float, default=2.0 / 3.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("plot", help="render sweep CSV columns as an SVG chart")
    p.add_argument("--csv", required=True)
    p.add_argument("--columns", required=True, help="comma-separated column names")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_plot)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DataFormatError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:        # out-of-range parameter reaching a library op
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
