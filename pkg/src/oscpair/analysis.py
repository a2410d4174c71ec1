"""Normal modes, spectral peak extraction and parameter sweeps."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .energies import EnergyReport, Spectrum, energy_report
from .model import OscillatorParams, SystemConfig, validate, InvalidConfig


class Stability(str, Enum):
    STABLE = "stable"
    CRITICAL = "critical"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class ModeSet:
    """Roots of the undamped coupled characteristic polynomial.

    omega_sq holds both roots of x^2 - (w01^2 + w02^2) x +
    (w01^2 w02^2 - lam^2/m1 m2), ascending; a negative low root means the
    static coupling overwhelms the restoring forces (unstable).
    real_modes lists the positive real mode frequencies, ascending.
    """

    omega_sq: tuple[float, float]
    real_modes: tuple[float, ...]
    stability: Stability


def critical_coupling(sys: SystemConfig) -> float:
    """Coupling where the soft mode frequency hits zero."""
    return sys.critical_coupling


def normal_modes(sys: SystemConfig) -> ModeSet:
    """Closed-form normal modes of the undamped coupled pair.

    The high root comes from the quadratic formula; the low root from the
    root product, which stays accurate when the two nearly cancel close
    to the critical coupling.
    """
    w1sq = sys.osc1.eigenfrequency**2
    w2sq = sys.osc2.eigenfrequency**2
    lam2 = sys.coupling**2 / (sys.osc1.mass * sys.osc2.mass)
    trace = w1sq + w2sq
    delta = math.sqrt((w1sq - w2sq) ** 2 + 4.0 * lam2)
    high = 0.5 * (trace + delta)
    product = w1sq * w2sq - lam2
    low = product / high
    # classify on the root product: it shares units with the w1sq*w2sq scale
    tol = 1e-12 * w1sq * w2sq
    if product > tol:
        stability = Stability.STABLE
        real_modes = (math.sqrt(low), math.sqrt(high))
    elif product < -tol:
        stability = Stability.UNSTABLE
        real_modes = (math.sqrt(high),)
    else:
        stability = Stability.CRITICAL
        real_modes = (math.sqrt(high),)
    return ModeSet((low, high), real_modes, stability)


def find_peaks(spectrum: Spectrum) -> list[tuple[float, float]]:
    """Local maxima of |values|, highest first.

    Three-point maxima refined by a parabola through the log heights,
    which nails the center of a narrow near-Lorentzian peak well below
    the grid spacing.  Edge samples never count as peaks; a monotone
    spectrum yields an empty list.
    """
    freqs = np.asarray(spectrum.frequencies, dtype=float)
    vals = np.abs(np.asarray(spectrum.values, dtype=float))
    if freqs.size < 3:
        raise ValueError("find_peaks requires at least 3 samples")
    peaks: list[tuple[float, float]] = []
    interior = np.flatnonzero(
        (vals[1:-1] > vals[:-2]) & (vals[1:-1] > vals[2:])
    ) + 1
    for i in interior:
        x0, h0 = freqs[i], vals[i]
        hm, hp = vals[i - 1], vals[i + 1]
        if hm > 0.0 and hp > 0.0 and h0 > 0.0:
            ym, y0, yp = math.log(hm), math.log(h0), math.log(hp)
            denom = ym - 2.0 * y0 + yp
            if denom < 0.0:
                shift = 0.5 * (ym - yp) / denom
                shift = max(-0.5, min(0.5, shift))
                x0 = x0 + shift * 0.5 * (freqs[i + 1] - freqs[i - 1])
                h0 = math.exp(y0 - 0.25 * (ym - yp) * shift)
        peaks.append((float(x0), float(h0)))
    peaks.sort(key=lambda p: -p[1])
    return peaks


@dataclass(frozen=True)
class SweepTable:
    """Energy reports along one swept parameter axis.

    axis_values are the raw sweep coordinates (absolute coupling or the
    frequency ratio), strictly monotone.  near_critical flags rows whose
    coupling lies within one part in 10^3 of the critical value.
    """

    axis_name: str
    axis_values: np.ndarray
    reports: list[EnergyReport]
    base: SystemConfig
    near_critical: tuple[bool, ...]


def _check_axis(values: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} sweep needs a nonempty 1-d axis")
    if arr.size > 1:
        diffs = np.diff(arr)
        if not (np.all(diffs > 0.0) or np.all(diffs < 0.0)):
            raise ValueError(f"{name} sweep axis must be strictly monotone")
    return arr


def sweep_coupling(
    sys: SystemConfig,
    coupling_values,
    *,
    rel_tol: float | None = None,
    abs_tol: float | None = None,
) -> SweepTable:
    """Energy reports over a list of absolute coupling strengths.

    Rows keep their own convergence flags; a hard row (for instance right
    at the critical coupling) does not abort the rest of the sweep.
    """
    values = _check_axis(coupling_values, "coupling")
    reports = []
    flags = []
    crit = sys.critical_coupling
    for lam in values:
        row = replace(sys, coupling=float(lam))
        reports.append(
            energy_report(row, rel_tol=rel_tol, abs_tol=abs_tol)
        )
        flags.append(abs(float(lam) - crit) / crit < 1e-3)
    return SweepTable("coupling", values, reports, sys, tuple(flags))


def sweep_frequency_ratio(
    sys: SystemConfig,
    ratio_values,
    *,
    rel_tol: float | None = None,
    abs_tol: float | None = None,
) -> SweepTable:
    """Energy reports over the eigenfrequency ratio omega02 / omega01.

    The second oscillator's damping tracks its eigenfrequency with the
    shared proportionality c = damping1 / omega01, so every row keeps the
    same relative linewidth.
    """
    values = _check_axis(ratio_values, "frequency-ratio")
    c = sys.osc1.damping / sys.osc1.eigenfrequency
    reports = []
    flags = []
    for ratio in values:
        w02 = float(ratio) * sys.osc1.eigenfrequency
        osc2 = OscillatorParams(sys.osc2.mass, w02, c * w02)
        row = replace(sys, osc2=osc2)
        rep = validate(row)
        if not rep.ok:
            raise InvalidConfig(rep)
        reports.append(energy_report(row, rel_tol=rel_tol, abs_tol=abs_tol))
        flags.append(abs(row.coupling - row.critical_coupling) / row.critical_coupling < 1e-3)
    return SweepTable("frequency_ratio", values, reports, sys, tuple(flags))
