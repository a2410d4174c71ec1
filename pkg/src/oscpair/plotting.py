"""SVG figure rendering for spectra and parameter sweeps.

Figures are drawn straight onto matplotlib Figure objects (no pyplot
state) and written as SVG with a pinned hash salt and no embedded
timestamp, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .analysis import SweepTable
from .energies import Spectrum
from .model import to_reduced

_SVG_RC = {
    "svg.hashsalt": "oscpair",
    "svg.fonttype": "path",
}


def _save(fig: Figure, path: Path) -> None:
    with matplotlib.rc_context(_SVG_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})


def save_spectrum_plot(spectrum: Spectrum, path) -> Path:
    """Line plot of the interaction energy density over frequency.

    Thin vertical markers sit at both eigenfrequencies; the abscissa is
    normalized to the first oscillator's eigenfrequency.
    """
    path = Path(path)
    red = to_reduced(spectrum.system)
    scale = red.omega_scale or 1.0
    x = spectrum.frequencies / scale
    y = spectrum.values

    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot()
    ax.plot(x, y, color="#1f77b4", linewidth=1.2)
    marks = (
        spectrum.system.osc1.eigenfrequency / scale,
        spectrum.system.osc2.eigenfrequency / scale,
    )
    for xm in marks:
        if x[0] <= xm <= x[-1]:
            ax.axvline(xm, color="0.4", linewidth=0.6, linestyle="-")
    ax.set_xlabel("omega / omega01")
    ax.set_ylabel("interaction energy density (reduced)")
    ax.grid(True, alpha=0.25, linewidth=0.4)
    fig.tight_layout()
    _save(fig, path)
    return path


def save_sweep_plot(table: SweepTable, path) -> Path:
    """Normalized interaction energy along the swept axis.

    Coupling sweeps are drawn against lambda / lambda_ref with a dashed
    marker at the critical coupling when it falls inside the range.
    """
    path = Path(path)
    if table.axis_name == "coupling":
        x = table.axis_values / table.base.lambda_ref
        xlabel = "coupling / lambda0"
        crit = table.base.critical_coupling / table.base.lambda_ref
    else:
        x = table.axis_values
        xlabel = "omega02 / omega01"
        crit = None
    y = [r.normalized_u_int for r in table.reports]

    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot()
    ax.plot(x, y, color="#d62728", linewidth=1.2)
    if crit is not None and x[0] <= crit <= x[-1]:
        ax.axvline(crit, color="0.4", linewidth=0.8, linestyle="--")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("u_int / (u1 + u2)")
    span = max(abs(float(v)) for v in y) if len(y) else 0.0
    if span > 0.0 and span < 1e-2:
        # keep tiny normalized values readable instead of flat lines
        ax.ticklabel_format(axis="y", style="sci", scilimits=(-2, 2))
    ax.grid(True, alpha=0.25, linewidth=0.4)
    fig.tight_layout()
    _save(fig, path)
    return path
