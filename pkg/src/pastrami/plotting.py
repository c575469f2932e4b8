"""Load-loss figures: log-scale PLR with CI whiskers, optional DR panel.

Figures are built with the object API (no pyplot state), so rendering is
safe to run from several threads at once.
"""

from __future__ import annotations

import io
import threading
from dataclasses import dataclass
from typing import Optional, Sequence

import matplotlib
from matplotlib.figure import Figure

from pastrami.metrics import InvalidInputError, LoadLevelStats
from pastrami.saturation import BAD, GOOD, NO_SATURATION, SaturationVerdict

#: Bottom of the log axis. Smaller PLR (including 0) is drawn here.
PLR_FLOOR = 1e-6

BANNER_COLORS = {GOOD: "#1a7f37", BAD: "#cf222e", NO_SATURATION: "#9a6700"}

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.fonttype": "path",
    "svg.hashsalt": "pastrami",
}

# rc_context swaps process-wide rcParams; concurrent renders would see each
# other's settings (and hash salt) without this.
_RC_LOCK = threading.RLock()


@dataclass(frozen=True)
class PlotData:
    """What actually lands on the log panel, in presentation units."""

    load_mpps: tuple[float, ...]
    plr: tuple[float, ...]  # clamped at PLR_FLOOR
    floored: tuple[bool, ...]
    ci_low: tuple[Optional[float], ...]
    ci_high: tuple[Optional[float], ...]
    dr: tuple[float, ...]


def _clamp(x: float) -> float:
    return min(max(x, PLR_FLOOR), 1.0)


def loss_plot_data(stats: Sequence[LoadLevelStats]) -> PlotData:
    return PlotData(
        load_mpps=tuple(s.offered_load / 1e6 for s in stats),
        plr=tuple(_clamp(s.plr) for s in stats),
        floored=tuple(s.plr < PLR_FLOOR for s in stats),
        ci_low=tuple(None if s.lcl95 is None else _clamp(s.lcl95) for s in stats),
        ci_high=tuple(None if s.ucl95 is None else _clamp(s.ucl95) for s in stats),
        dr=tuple(s.dr for s in stats),
    )


def build_loss_figure(
    stats: Sequence[LoadLevelStats],
    verdict: SaturationVerdict,
    with_delivery: bool = True,
    title: str = "",
) -> Figure:
    if len(stats) < 2:
        raise InvalidInputError("a load-loss plot needs >= 2 levels; use the tabular report instead")
    data = loss_plot_data(stats)
    color = BANNER_COLORS[verdict.classification]

    with _RC_LOCK, matplotlib.rc_context(STYLE):
        nrows = 2 if with_delivery else 1
        fig = Figure(figsize=(6.4, 2.6 * nrows + 0.6))
        axes = fig.subplots(nrows, 1, sharex=True, squeeze=False)[:, 0]
        ax = axes[0]

        above = [i for i, f in enumerate(data.floored) if not f]
        below = [i for i, f in enumerate(data.floored) if f]
        if above:
            xs = [data.load_mpps[i] for i in above]
            ys = [data.plr[i] for i in above]
            lo = [ys[j] - (data.ci_low[i] if data.ci_low[i] is not None else ys[j]) for j, i in enumerate(above)]
            hi = [(data.ci_high[i] if data.ci_high[i] is not None else ys[j]) - ys[j] for j, i in enumerate(above)]
            ax.errorbar(xs, ys, yerr=[lo, hi], fmt="o-", color="tab:green", ms=3,
                        capsize=2, lw=1, label="PLR (95% CI)")
        if below:
            ax.plot([data.load_mpps[i] for i in below], [PLR_FLOOR] * len(below), "v",
                    color="0.45", ms=4, ls="none", label=f"PLR < {PLR_FLOOR:g}")
        ax.set_yscale("log")
        ax.set_ylim(PLR_FLOOR / 2, 1.5)
        ax.axhline(verdict.pdr_threshold, color="0.5", ls=":", lw=0.8,
                   label=f"threshold {verdict.pdr_threshold:g}")
        if verdict.pdr_load is not None:
            ax.axvline(verdict.pdr_load / 1e6, color="tab:blue", ls="--", lw=1,
                       label=f"PDR {verdict.pdr_load / 1e6:.4g} Mpps")
        ax.set_ylabel("packet loss ratio")
        ax.legend(loc="upper left")

        if with_delivery:
            ax2 = axes[1]
            ax2.plot(data.load_mpps, data.dr, "o-", color="tab:red", ms=3, lw=1, label="DR")
            ax2.set_ylim(-0.02, 1.02)
            ax2.set_ylabel("delivery ratio")
            if verdict.pdr_load is not None:
                ax2.axvline(verdict.pdr_load / 1e6, color="tab:blue", ls="--", lw=1)
            ax2.legend(loc="lower left")
        axes[-1].set_xlabel("offered load [Mpps]")

        banner = verdict.classification.replace("_", " ")
        fig.suptitle(f"{banner}  {title}".rstrip(), color=color, fontweight="bold")
        fig.patch.set_edgecolor(color)
        fig.patch.set_linewidth(4)
    return fig


def render_loss_plot(
    stats: Sequence[LoadLevelStats],
    verdict: SaturationVerdict,
    with_delivery: bool = True,
    title: str = "",
) -> bytes:
    """Self-contained SVG document; identical inputs give identical bytes."""
    fig = build_loss_figure(stats, verdict, with_delivery, title)
    buf = io.BytesIO()
    with _RC_LOCK, matplotlib.rc_context(STYLE):
        fig.savefig(buf, format="svg", metadata={"Date": None}, edgecolor=fig.get_edgecolor())
    return buf.getvalue()
