"""Figure rendering for verification reports.

One entry point, `render_report`, draws whatever a report's result rows
support: rows carrying stochastic estimates become an error-bar panel per
component against the reference, rows carrying residuals against a fixed
tolerance become a log-scale bar chart.  Files are written through the Agg
backend, so no display is required.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _estimate_rows(results):
    return [r for r in results if r.get("stderr") is not None and r.get("reference") is not None]


def _residual_rows(results):
    return [r for r in results if r.get("tolerance") is not None]


def render_report(report: dict, path: str) -> None:
    results = report.get("results", [])
    est_rows = _estimate_rows(results)
    res_rows = _residual_rows(results)
    n_panels = (1 if est_rows else 0) + (1 if res_rows else 0)
    if n_panels == 0:
        est_rows = results  # value-only commands: plot the bare estimates
        n_panels = 1
    fig, axes = plt.subplots(1, n_panels, figsize=(5.5 * n_panels, 4.0))
    axes = np.atleast_1d(axes)
    panel = 0
    if est_rows:
        _draw_estimates(axes[panel], est_rows)
        panel += 1
    if res_rows:
        _draw_residuals(axes[panel], res_rows)
    fig.suptitle(f"{report.get('command', 'report')}  (seed {report['config'].get('seed')})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _draw_estimates(ax, rows):
    idx = np.arange(len(rows))
    est_re = [r["estimate"]["re"] for r in rows]
    est_im = [r["estimate"]["im"] for r in rows]
    err = [4.0 * (r.get("stderr") or 0.0) for r in rows]
    ax.errorbar(idx - 0.08, est_re, yerr=err, fmt="o", capsize=3, label="estimate Re")
    ax.errorbar(idx + 0.08, est_im, yerr=err, fmt="s", capsize=3, label="estimate Im")
    refs = [r.get("reference") for r in rows]
    if any(refs):
        ref_re = [r["re"] if r else np.nan for r in refs]
        ref_im = [r["im"] if r else np.nan for r in refs]
        ax.plot(idx, ref_re, "_", markersize=18, color="k", label="reference Re")
        ax.plot(idx, ref_im, "_", markersize=18, color="gray", label="reference Im")
    ax.set_xticks(idx)
    ax.set_xticklabels([str(r.get("point", i)) for i, r in enumerate(rows)], rotation=20, fontsize=7)
    ax.set_xlabel("evaluation point")
    ax.set_ylabel("value (bars: 4 standard errors)")
    ax.legend(fontsize=7)
    ax.grid(alpha=0.3)


def _draw_residuals(ax, rows):
    idx = np.arange(len(rows))
    errors = [max(abs(r["estimate"]["re"]), 1e-18) for r in rows]
    tols = [r["tolerance"] for r in rows]
    ax.bar(idx, errors, width=0.6, label="residual")
    ax.plot(idx, tols, "r_", markersize=20, label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(idx)
    ax.set_xticklabels([str(r.get("point", i)) for i, r in enumerate(rows)], rotation=20, fontsize=7)
    ax.set_ylabel("max residual")
    ax.legend(fontsize=7)
    ax.grid(alpha=0.3, which="both")
