"""Stationary mean energies of the coupled pair from spectral integrals.

Each oscillator's mean energy picks up one term per bath: its own bath
drives it directly, the partner's bath leaks in through the coupling.
With rho_i the bath spectral densities, Theta the thermal mode energy and
det the coupled stiffness determinant, in reduced units:

  u1 = (lam^2/m2^2) int dw/pi rho2 (w^2 + w01^2) Theta(w, T2) / |det|^2
       +            int dw/pi rho1 (w^2 + w01^2) Theta(w, T1) |k2|^2 / |det|^2

with k2 the partner's dynamic stiffness; u2 mirrors it under the swap
1 <-> 2.  The interaction energy is

  u_int = -(2 lam^2 / m1 m2) [ int dw/pi rho1 Theta(w, T1) Re k2 / |det|^2
                             + int dw/pi rho2 Theta(w, T2) Re k1 / |det|^2 ].

Each bath term integrates over that bath's own support: [0, cutoff] for
flat_ohmic and debye, twelve standard deviations around the attached
eigenfrequency for gauss.  Integration runs in reduced units; results are
rescaled to erg for CGS configs.  Near the critical coupling the soft
mode dives toward zero frequency and the low-frequency region gets a
dedicated panel judged on absolute tolerance; when that panel dominates
the error budget the result is flagged non-converged rather than
silently trusted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    BathModel,
    BathSpec,
    OscillatorParams,
    ReducedSystem,
    SystemConfig,
    swap_system,
    to_reduced,
)
from .quadrature import IntegrandSpec, IntegrationResult, integrate, resonance_breakpoints
from .response import dynamic_stiffness, mode_energy_reduced, spectral_density

REL_TOL_DEFAULT = 1e-8
ABS_TOL_DEFAULT = 1e-14

# relative distance to the critical coupling below which the low-frequency
# spike gets its own panel
NEAR_CRITICAL_BAND = 1e-3

_GAUSS_SUPPORT_SIGMAS = 12.0
_INV_PI = 1.0 / math.pi

_EXACT_ZERO = IntegrationResult(0.0, 0.0, 0, True)


class NonConvergedQuadrature(RuntimeError):
    """Raised by strict=True calls; carries the partial result."""

    def __init__(self, result):
        self.result = result
        super().__init__("energy integral did not converge to tolerance")


@dataclass(frozen=True)
class Spectrum:
    """Sampled interaction energy density over frequency.

    Frequencies and values follow the config's units: rad/s and erg s for
    CGS, omega01 and hbar*omega01 per omega01 for reduced.
    """

    frequencies: np.ndarray
    values: np.ndarray
    system: SystemConfig


@dataclass(frozen=True)
class EnergyReport:
    """The three stationary energies with per-integral diagnostics.

    Values are erg for CGS configs (energy_scale holds erg per reduced
    unit) and reduced otherwise (energy_scale is None).
    """

    u1: IntegrationResult
    u2: IntegrationResult
    u_int: IntegrationResult
    normalized_u_int: float
    unstable: bool
    energy_scale: float | None

    @property
    def converged(self) -> bool:
        return self.u1.converged and self.u2.converged and self.u_int.converged

    def _reduced(self, x: float) -> float:
        return x if self.energy_scale is None else x / self.energy_scale

    @property
    def u1_reduced(self) -> float:
        return self._reduced(self.u1.value)

    @property
    def u2_reduced(self) -> float:
        return self._reduced(self.u2.value)

    @property
    def u_int_reduced(self) -> float:
        return self._reduced(self.u_int.value)


def _bath_domain(bath: BathSpec, attached: OscillatorParams) -> tuple[float, float]:
    if bath.model is BathModel.GAUSS:
        lo = max(0.0, attached.eigenfrequency - _GAUSS_SUPPORT_SIGMAS * bath.gauss_sigma)
        return lo, attached.eigenfrequency + _GAUSS_SUPPORT_SIGMAS * bath.gauss_sigma
    return 0.0, bath.cutoff


def _soft_cut(rs: SystemConfig) -> float | None:
    """Low-frequency panel edge when the coupling is near critical."""
    crit = rs.critical_coupling
    if abs(rs.coupling - crit) / crit >= NEAR_CRITICAL_BAND:
        return None
    from .analysis import normal_modes

    modes = normal_modes(rs)
    floor = 0.05 * min(rs.osc1.eigenfrequency, rs.osc2.eigenfrequency)
    if len(modes.real_modes) == 2:
        return min(0.5 * modes.real_modes[0], floor)
    return floor


def _integrate_term(
    f,
    domain: tuple[float, float],
    breakpoints: tuple[float, ...],
    rel_tol: float,
    abs_tol: float,
    soft_cut: float | None,
) -> IntegrationResult:
    lo, hi = domain
    if soft_cut is not None and lo == 0.0 and soft_cut < hi:
        low = integrate(
            IntegrandSpec(f, (lo, soft_cut), breakpoints, rel_tol, abs_tol)
        )
        high = integrate(
            IntegrandSpec(f, (soft_cut, hi), breakpoints, rel_tol, abs_tol)
        )
        value = low.value + high.value
        error = low.error_estimate + high.error_estimate
        tol = max(abs_tol, rel_tol * abs(value))
        spike_dominated = (
            low.error_estimate > 0.5 * tol
            and low.error_estimate >= high.error_estimate
        )
        converged = (
            low.converged and high.converged and error <= tol and not spike_dominated
        )
        return IntegrationResult(
            value, error, low.evaluations + high.evaluations, converged
        )
    return integrate(IntegrandSpec(f, domain, breakpoints, rel_tol, abs_tol))


def _combine(scale: float, *parts: IntegrationResult) -> IntegrationResult:
    value = scale * math.fsum(p.value for p in parts)
    error = abs(scale) * math.fsum(p.error_estimate for p in parts)
    evals = sum(p.evaluations for p in parts)
    return IntegrationResult(value, error, evals, all(p.converged for p in parts))


def _tolerances(rel_tol: float | None, abs_tol: float | None) -> tuple[float, float]:
    return (
        REL_TOL_DEFAULT if rel_tol is None else rel_tol,
        ABS_TOL_DEFAULT if abs_tol is None else abs_tol,
    )


def mean_energy_1(
    sys: SystemConfig,
    *,
    rel_tol: float | None = None,
    abs_tol: float | None = None,
    strict: bool = False,
) -> IntegrationResult:
    """Stationary mean energy of the first oscillator.

    Returns erg for CGS configs, reduced units otherwise.  At zero
    coupling the partner-bath term is dropped exactly, so the result does
    not depend on the second bath at all.
    """
    rel, ab = _tolerances(rel_tol, abs_tol)
    red = to_reduced(sys)
    rs = red.system
    scale = red.energy_scale if red.energy_scale is not None else 1.0
    o1, o2 = rs.osc1, rs.osc2
    lam = rs.coupling
    lam2_masses = lam**2 / (o1.mass * o2.mass)
    w01sq = o1.eigenfrequency**2
    th1 = rs.bath1.temperature
    th2 = rs.bath2.temperature
    bps = resonance_breakpoints(rs)
    cut = _soft_cut(rs)

    def own_bath(w: np.ndarray) -> np.ndarray:
        k1 = dynamic_stiffness(o1, w)
        k2 = dynamic_stiffness(o2, w)
        det2 = np.abs(k1 * k2 - lam2_masses) ** 2
        k2sq = k2.real**2 + k2.imag**2
        return (
            spectral_density(rs.bath1, o1, w)
            * (w * w + w01sq)
            * mode_energy_reduced(w, th1)
            * k2sq
            / det2
            * _INV_PI
        )

    parts = [
        _integrate_term(own_bath, _bath_domain(rs.bath1, o1), bps, rel, ab, cut)
    ]
    if lam != 0.0:
        pref = lam**2 / o2.mass**2

        def partner_bath(w: np.ndarray) -> np.ndarray:
            k1 = dynamic_stiffness(o1, w)
            k2 = dynamic_stiffness(o2, w)
            det2 = np.abs(k1 * k2 - lam2_masses) ** 2
            return (
                pref
                * spectral_density(rs.bath2, o2, w)
                * (w * w + w01sq)
                * mode_energy_reduced(w, th2)
                / det2
                * _INV_PI
            )

        parts.append(
            _integrate_term(partner_bath, _bath_domain(rs.bath2, o2), bps, rel, ab, cut)
        )

    out = _combine(scale, *parts)
    if strict and not out.converged:
        raise NonConvergedQuadrature(out)
    return out


def mean_energy_2(
    sys: SystemConfig,
    *,
    rel_tol: float | None = None,
    abs_tol: float | None = None,
    strict: bool = False,
) -> IntegrationResult:
    """Stationary mean energy of the second oscillator (mirror of the first)."""
    return mean_energy_1(
        swap_system(sys), rel_tol=rel_tol, abs_tol=abs_tol, strict=strict
    )


def interaction_energy(
    sys: SystemConfig,
    *,
    rel_tol: float | None = None,
    abs_tol: float | None = None,
    strict: bool = False,
) -> IntegrationResult:
    """Stationary mean interaction energy; exactly zero at zero coupling."""
    rel, ab = _tolerances(rel_tol, abs_tol)
    red = to_reduced(sys)
    rs = red.system
    if rs.coupling == 0.0:
        return _EXACT_ZERO
    scale = red.energy_scale if red.energy_scale is not None else 1.0
    o1, o2 = rs.osc1, rs.osc2
    lam2_masses = rs.coupling**2 / (o1.mass * o2.mass)
    th1 = rs.bath1.temperature
    th2 = rs.bath2.temperature
    bps = resonance_breakpoints(rs)
    cut = _soft_cut(rs)

    def bath1_term(w: np.ndarray) -> np.ndarray:
        k1 = dynamic_stiffness(o1, w)
        k2 = dynamic_stiffness(o2, w)
        det2 = np.abs(k1 * k2 - lam2_masses) ** 2
        return (
            spectral_density(rs.bath1, o1, w)
            * mode_energy_reduced(w, th1)
            * k2.real
            / det2
            * _INV_PI
        )

    def bath2_term(w: np.ndarray) -> np.ndarray:
        k1 = dynamic_stiffness(o1, w)
        k2 = dynamic_stiffness(o2, w)
        det2 = np.abs(k1 * k2 - lam2_masses) ** 2
        return (
            spectral_density(rs.bath2, o2, w)
            * mode_energy_reduced(w, th2)
            * k1.real
            / det2
            * _INV_PI
        )

    parts = [
        _integrate_term(bath1_term, _bath_domain(rs.bath1, o1), bps, rel, ab, cut),
        _integrate_term(bath2_term, _bath_domain(rs.bath2, o2), bps, rel, ab, cut),
    ]
    out = _combine(-2.0 * lam2_masses * scale, *parts)
    if strict and not out.converged:
        raise NonConvergedQuadrature(out)
    return out


def interaction_spectral_density(sys: SystemConfig, omega):
    """Pointwise frequency density of the interaction energy.

    Integrating this over frequency reproduces interaction_energy: each
    bath term carries an indicator of its own integration support, so the
    hard cutoffs show up as hard zeros here too.  Units follow the
    config: erg s per rad/s input for CGS, reduced otherwise.  Requires
    omega > 0.
    """
    red = to_reduced(sys)
    rs = red.system
    wscale = red.omega_scale if red.omega_scale is not None else 1.0
    w = np.asarray(omega, dtype=float) / wscale
    if np.any(w <= 0.0):
        raise ValueError("interaction_spectral_density requires omega > 0")
    o1, o2 = rs.osc1, rs.osc2
    lam2_masses = rs.coupling**2 / (o1.mass * o2.mass)
    k1 = dynamic_stiffness(o1, w)
    k2 = dynamic_stiffness(o2, w)
    det2 = np.abs(k1 * k2 - lam2_masses) ** 2
    total = np.zeros_like(w)
    for bath, attached, partner_k in (
        (rs.bath1, o1, k2),
        (rs.bath2, o2, k1),
    ):
        lo, hi = _bath_domain(bath, attached)
        inside = (w >= lo) & (w <= hi)
        theta = mode_energy_reduced(w, bath.temperature)
        total = total + np.where(
            inside,
            spectral_density(bath, attached, w) * theta * partner_k.real,
            0.0,
        )
    out = -2.0 * lam2_masses * _INV_PI * total / det2
    if red.omega_scale is not None:
        # erg per (rad/s): reduced value times hbar
        out = out * (red.energy_scale / red.omega_scale)
    return out if np.ndim(omega) else float(out)


def sample_spectrum(sys: SystemConfig, omegas) -> Spectrum:
    """Evaluate the interaction density on a strictly increasing grid."""
    freqs = np.asarray(omegas, dtype=float)
    if freqs.ndim != 1 or freqs.size == 0:
        raise ValueError("sample_spectrum requires a nonempty 1-d frequency grid")
    if freqs.size > 1 and not np.all(np.diff(freqs) > 0.0):
        raise ValueError("sample_spectrum requires strictly increasing frequencies")
    values = np.asarray(interaction_spectral_density(sys, freqs), dtype=float)
    return Spectrum(freqs, values, sys)


def equilibrium_single_energy(
    osc: OscillatorParams,
    temperature: float,
    omega_max: float,
    *,
    units: str = "cgs",
    rel_tol: float | None = None,
    abs_tol: float | None = None,
) -> IntegrationResult:
    """Mean energy of one damped oscillator in a single flat-spectrum bath.

    The uncoupled equilibrium limit: with rho = 2 gamma,

      u = int_0^omega_max dw/pi 2 gamma (w^2 + w0^2) Theta(w, T)
          / ((w^2 - w0^2)^2 + 4 gamma^2 w^2).

    ``temperature`` is kelvin for units="cgs" (result in erg) and the
    reduced theta for units="reduced".
    """
    from .model import CONSTANTS

    rel, ab = _tolerances(rel_tol, abs_tol)
    if units not in ("cgs", "reduced"):
        raise ValueError("units must be 'cgs' or 'reduced'")
    if not (osc.eigenfrequency > 0.0) or not (osc.mass > 0.0):
        raise ValueError("oscillator parameters must be positive")
    if not (0.0 <= osc.damping < osc.eigenfrequency):
        raise ValueError("underdamped oscillator required")
    if temperature < 0.0 or not (omega_max > 0.0):
        raise ValueError("temperature must be >= 0 and omega_max > 0")
    if units == "cgs":
        wscale = osc.eigenfrequency
        w0 = 1.0
        gamma = osc.damping / wscale
        theta = CONSTANTS.k_boltzmann * temperature / (CONSTANTS.hbar * wscale)
        wmax = omega_max / wscale
        scale = CONSTANTS.hbar * wscale
    else:
        w0 = osc.eigenfrequency
        gamma = osc.damping
        theta = temperature
        wmax = omega_max
        scale = 1.0
    w0sq = w0**2
    two_gamma = 2.0 * gamma

    def integrand(w: np.ndarray) -> np.ndarray:
        return (
            two_gamma
            * (w * w + w0sq)
            * mode_energy_reduced(w, theta)
            / ((w * w - w0sq) ** 2 + 4.0 * gamma**2 * w * w)
            * _INV_PI
        )

    bps = (w0,) if w0 < wmax else ()
    result = integrate(IntegrandSpec(integrand, (0.0, wmax), bps, rel, ab))
    return IntegrationResult(
        scale * result.value,
        scale * result.error_estimate,
        result.evaluations,
        result.converged,
    )


def energy_report(
    sys: SystemConfig,
    *,
    rel_tol: float | None = None,
    abs_tol: float | None = None,
    strict: bool = False,
) -> EnergyReport:
    """All three stationary energies plus the scale-free interaction ratio."""
    red = to_reduced(sys)
    u1 = mean_energy_1(sys, rel_tol=rel_tol, abs_tol=abs_tol)
    u2 = mean_energy_2(sys, rel_tol=rel_tol, abs_tol=abs_tol)
    u_int = interaction_energy(sys, rel_tol=rel_tol, abs_tol=abs_tol)
    report = EnergyReport(
        u1=u1,
        u2=u2,
        u_int=u_int,
        normalized_u_int=u_int.value / (u1.value + u2.value),
        unstable=red.system.unstable,
        energy_scale=red.energy_scale,
    )
    if strict and not report.converged:
        raise NonConvergedQuadrature(report)
    return report
