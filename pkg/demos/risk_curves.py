"""Risk curves of linearized kernel ridge regression on synthetic data.

Walks a sample-size grid with the schedule lambda = cbar * n^(-theta),
removing the implicit curvature ridge (gamma override 0) so the explicit
schedule is the only regularization, then classifies the resulting variance
and risk curves and renders them as an SVG chart.

Run:  python demos/risk_curves.py
"""

import pathlib

from krrlab import ExperimentConfig, classify_curve, emit_plot, run_sweep

OUT = pathlib.Path("demo_output")
OUT.mkdir(exist_ok=True)

for kernel in ("gaussian", "polynomial"):
    csv_path = OUT / f"risk_{kernel}.csv"
    config = ExperimentConfig(
        mode="synth", kernel=kernel, use_linearized=True, gamma_override=0.0,
        decay="harmonic", d=200, n_grid="50:400:50", cbar=0.01, theta=2 / 3,
        sigma=1.0, trials=3, seed=0, test_points=500, noise_draws=20,
        output_path=str(csv_path))
    points, _ = run_sweep(config)

    var_curve = [p.var_emp for p in points]
    risk_curve = [p.risk_emp for p in points]
    print(f"== linearized {kernel} kernel, harmonic data, d=200")
    print(f"   n grid        : {[p.n for p in points]}")
    print(f"   variance      : {['%.3f' % v for v in var_curve]}")
    print(f"   risk          : {['%.3f' % v for v in risk_curve]}")
    print(f"   variance shape: {classify_curve(var_curve).value}")
    print(f"   risk shape    : {classify_curve(risk_curve).value}")

    svg_path = OUT / f"risk_{kernel}.svg"
    emit_plot(str(csv_path), ["risk_emp", "var_emp", "bias_emp", "v1_bound"],
              str(svg_path))
    print(f"   wrote {csv_path} and {svg_path}\n")
