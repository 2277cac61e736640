"""Rendering of witness-vs-transmissivity curves to image files.

The CSV emitted by the CLI stays the authoritative data format; these plots
are a convenience report rendered alongside it. Uses the non-interactive Agg
backend so it works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .witness import SEPARABILITY_THRESHOLD


def save_witness_plot(path, curves, title: str = "") -> None:
    """Plot nu^2 against eta for one or more labelled curves.

    curves: iterable of (label, etas, nu_squared, delta_or_None). When delta
    is given, a band of +-2*delta (the confidence interval used for
    conclusive verdicts) is shaded around the curve.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for label, etas, nu2, delta in curves:
        etas = np.asarray(etas, dtype=float)
        nu2 = np.asarray(nu2, dtype=float)
        (line,) = ax.plot(etas, nu2, label=label, linewidth=1.6)
        if delta is not None:
            delta = np.asarray(delta, dtype=float)
            ax.fill_between(
                etas,
                nu2 - 2.0 * delta,
                nu2 + 2.0 * delta,
                color=line.get_color(),
                alpha=0.22,
                linewidth=0,
            )
    ax.axhline(
        SEPARABILITY_THRESHOLD,
        color="0.35",
        linestyle=":",
        linewidth=1.2,
        label="separability threshold",
    )
    ax.set_xlabel(r"transmissivity $\eta$")
    ax.set_ylabel(r"$\nu^2$")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
