"""Render experiment reports as figures next to the CSV/JSON output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .engine import ExperimentReport

_COLORS = plt.rcParams["axes.prop_cycle"].by_key()["color"]


def _padded_best(run) -> list[float]:
    # Runs that hit the target stop early; with elitism, best stays put.
    return [s.best for s in run.stats]


def render_convergence(report: ExperimentReport, path) -> None:
    """Best-fitness and diversity curves per family: thin per-seed lines,
    bold mean over seeds."""
    fig, (ax_best, ax_div) = plt.subplots(
        2, 1, figsize=(7.0, 6.0), sharex=True, height_ratios=[2, 1]
    )
    horizon = max((r.generations_run for r in report.runs), default=1)
    for fi, name in enumerate(report.family_names()):
        color = _COLORS[fi % len(_COLORS)]
        runs = report.runs_for(name)
        padded = []
        for run in runs:
            best = _padded_best(run)
            best = best + [best[-1]] * (horizon - len(best))
            padded.append(best)
            ax_best.plot(best, color=color, alpha=0.25, linewidth=0.8)
            div = [s.diversity for s in run.stats]
            ax_div.plot(div, color=color, alpha=0.25, linewidth=0.8)
        if padded:
            mean = [sum(col) / len(col) for col in zip(*padded)]
            ax_best.plot(mean, color=color, linewidth=2.0, label=name)
    ax_best.set_ylabel("best fitness")
    ax_best.legend(loc="lower right", fontsize=8)
    ax_best.grid(True, alpha=0.3)
    ax_div.set_ylabel("distinct individuals")
    ax_div.set_xlabel("generation")
    ax_div.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
