"""Canned pipelines reproducing the figure suite as SVG files."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import generators as gen
from .analysis.forecast import return_map_fit
from .embedding import EmbeddingConfig, delay_embed, successive_maxima, suggest_lag
from .pipeline import AnalysisConfig, analyze
from .report import svg
from .report.document import emit_report
from .series import normalize


def _write(out: Path, name: str, text: str, written: list):
    (out / name).write_text(text)
    written.append(name)


def reproduce_figures(out_dir, seed: int = 0, n: int = 10_000, analyses: bool = True,
                      workers: int = 1) -> dict:
    """Write the figure analogues into ``out_dir`` and return a summary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    rng = gen.make_rng(seed)
    x0 = float(rng.uniform(0.05, 0.95))
    summary = {"seed": seed, "n": n, "logistic_x0": x0}

    logistic = gen.logistic_series(x0, 4.0, n)
    _write(out, "fig1_logistic_series.svg",
           svg.render_series(logistic.values, "Logistic map, k = 4: seemingly random data"),
           written)
    p2 = delay_embed(logistic, EmbeddingConfig(2, 1))
    _write(out, "fig2_logistic_portrait_2d.svg",
           svg.render_portrait(p2, (0, 1), "Reconstructed attractor (2-D)"), written)
    p3 = delay_embed(logistic, EmbeddingConfig(3, 1))
    _write(out, "fig3_logistic_portrait_3d.svg",
           svg.render_portrait(p3, (0, 1, 2), "Reconstructed attractor (3-D)"), written)
    resid = np.abs(p2.points[:, 1] - 4.0 * p2.points[:, 0] * (1.0 - p2.points[:, 0]))
    summary["logistic_parabola_max_residual"] = float(resid.max())

    hx, hy = gen.henon_series(0.0, 0.0, gen.MapParams(), n)
    henon = delay_embed(hx, EmbeddingConfig(2, 1))
    _write(out, "henon_portrait_2d.svg",
           svg.render_portrait(henon, (0, 1), "Henon map, a = 1.4, b = 0.3"), written)

    iid = gen.iid_uniform(n, seed)
    _write(out, "fig4_iid_portrait_3d.svg",
           svg.render_portrait(delay_embed(iid, EmbeddingConfig(3, 1)), (0, 1, 2),
                               "Independent random events: no structure"), written)

    lx, _, lz = gen.lorenz_series((1.0, 1.0, 1.0), gen.LorenzParams(), 5 * n)
    lag = suggest_lag(normalize(lx))
    lorenz = delay_embed(lx, EmbeddingConfig(3, lag))
    _write(out, "fig5_lorenz_reconstructed_3d.svg",
           svg.render_portrait(lorenz, (0, 1, 2), "Lorenz attractor from x(t) alone",
                               point_radius=0.6), written)
    maxima = successive_maxima(lz)
    _write(out, "fig6_lorenz_map.svg",
           svg.render_return_map(maxima.values, "Lorenz map: successive maxima of z"),
           written)
    fit = return_map_fit(maxima)
    summary["lorenz_lag"] = lag
    summary["lorenz_map"] = {"maxima": maxima.length,
                             "relative_residual": fit.relative_residual}

    if analyses:
        verdicts = {}
        for name, series in (("logistic", logistic), ("iid", iid)):
            report = analyze(series, AnalysisConfig(seed=seed), workers=workers)
            (out / f"report_{name}.json").write_text(emit_report(report))
            written.append(f"report_{name}.json")
            for curve in report.curves:
                _write(out, f"curve_{name}_m{curve.embedding_dimension}.svg",
                       svg.render_curve(curve), written)
            verdicts[name] = report.verdict.classification
        summary["verdicts"] = verdicts

    summary["files"] = sorted(written)
    (out / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return summary
