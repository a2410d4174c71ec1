"""Frequency-domain response kernels of the coupled pair.

All functions are unit agnostic: feed CGS values to get CGS results,
reduced values to get reduced results.  ``mode_energy`` is the one
exception (it needs hbar and k_B); its reduced twin is
``mode_energy_reduced``.  Everything accepts numpy arrays for the
frequency argument.
"""
from __future__ import annotations

import numpy as np

from .model import CONSTANTS, BathModel, BathSpec, OscillatorParams, SystemConfig

# coth(x) branch points: Laurent series below, exp form above, saturated to 1
# once exp(-2x) underflows any relevance.
_SERIES_CUT = 0.05
_UNITY_CUT = 350.0

# |det| floor (in units of omega01^4) below which the transfer matrix is
# treated as singular.
SINGULAR_FLOOR = 1e-12


class SingularResponse(ZeroDivisionError):
    """Transfer matrix requested at a frequency where the determinant vanishes."""


def _coth(x: np.ndarray) -> np.ndarray:
    """coth(x) for x > 0, stable from 1e-8 to 1e4 and beyond."""
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    small = x <= _SERIES_CUT
    mid = ~small & (x < _UNITY_CUT)
    xs = x[small]
    out[small] = 1.0 / xs + xs / 3.0 - xs**3 / 45.0
    xm = x[mid]
    out[mid] = 1.0 + 2.0 / np.expm1(2.0 * xm)
    return out


def mode_energy(omega, temperature: float):
    """Mean energy (erg) of a free mode at omega (rad/s) and T (K).

    (hbar omega / 2) coth(hbar omega / 2 k_B T); exactly hbar omega / 2
    at T = 0.  Strictly positive, monotone in both arguments.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0.0):
        raise ValueError("mode_energy requires omega > 0")
    if temperature < 0.0:
        raise ValueError("mode_energy requires temperature >= 0")
    zero_point = 0.5 * CONSTANTS.hbar * w
    if temperature == 0.0:
        return zero_point if np.ndim(omega) else float(zero_point)
    x = 0.5 * CONSTANTS.hbar * w / (CONSTANTS.k_boltzmann * temperature)
    out = zero_point * _coth(x)
    return out if np.ndim(omega) else float(out)


def mode_energy_reduced(omega, theta: float):
    """Reduced-unit twin of mode_energy: (w/2) coth(w / 2 theta)."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0.0):
        raise ValueError("mode_energy_reduced requires omega > 0")
    if theta < 0.0:
        raise ValueError("mode_energy_reduced requires theta >= 0")
    zero_point = 0.5 * w
    if theta == 0.0:
        return zero_point if np.ndim(omega) else float(zero_point)
    out = zero_point * _coth(0.5 * w / theta)
    return out if np.ndim(omega) else float(out)


def dynamic_stiffness(osc: OscillatorParams, omega):
    """Per-mass dynamic stiffness (omega0^2 - omega^2) - 2i gamma omega.

    The inverse of the single-oscillator susceptibility.  Satisfies
    f(-omega) = conj(f(omega)).
    """
    w = np.asarray(omega, dtype=float)
    out = (osc.eigenfrequency**2 - w**2) - 2.0j * osc.damping * w
    return out if np.ndim(omega) else complex(out)


def response_determinant(sys: SystemConfig, omega):
    """Determinant of the coupled per-mass stiffness matrix.

    dynamic_stiffness_1 * dynamic_stiffness_2 - coupling^2 / (m1 m2).
    Zeros of its real part at zero damping sit at the normal modes.
    """
    d = dynamic_stiffness(sys.osc1, omega) * dynamic_stiffness(sys.osc2, omega)
    d = d - sys.coupling**2 / (sys.osc1.mass * sys.osc2.mass)
    return d if np.ndim(omega) else complex(d)


def spectral_density(bath: BathSpec, attached: OscillatorParams, omega):
    """Bath spectral density rho(omega), normalized so rho(omega0) = 2 gamma.

    flat_ohmic: 2 gamma everywhere (the integration domain supplies the
    cutoff).  debye: 2 gamma (omega/omega0)^2, hard zero above the cutoff.
    gauss: 2 gamma exp(-(omega - omega0)^2 / 2 sigma^2), untruncated.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("spectral_density requires omega >= 0")
    two_gamma = 2.0 * attached.damping
    if bath.model is BathModel.FLAT_OHMIC:
        out = np.full_like(w, two_gamma)
    elif bath.model is BathModel.DEBYE:
        out = np.where(
            w <= bath.cutoff,
            two_gamma * (w / attached.eigenfrequency) ** 2,
            0.0,
        )
    elif bath.model is BathModel.GAUSS:
        sigma = bath.gauss_sigma
        if sigma is None:
            raise ValueError("gauss model requires gauss_sigma")
        out = two_gamma * np.exp(-((w - attached.eigenfrequency) ** 2) / (2.0 * sigma**2))
    else:
        raise ValueError(f"unknown bath model {bath.model!r}")
    return out if np.ndim(omega) else float(out)


class TransferMatrix:
    """2x2 frequency response: displacement per unit per-mass force."""

    __slots__ = ("t11", "t12", "t21", "t22")

    def __init__(self, t11: complex, t12: complex, t21: complex, t22: complex):
        self.t11 = t11
        self.t12 = t12
        self.t21 = t21
        self.t22 = t22


def transfer_matrix(
    sys: SystemConfig, omega: float, floor: float = SINGULAR_FLOOR
) -> TransferMatrix:
    """Coupled response matrix at a single frequency.

    Raises SingularResponse when |determinant| falls below ``floor`` in
    units of omega01^4 (this happens at the normal modes of an undamped
    system, and at omega = 0 when the coupling is exactly critical).
    """
    det = response_determinant(sys, omega)
    scale = sys.osc1.eigenfrequency**4
    if abs(det) < floor * scale:
        raise SingularResponse(
            f"response determinant magnitude {abs(det):.3e} below floor at omega={omega!r}"
        )
    b1 = dynamic_stiffness(sys.osc1, omega)
    b2 = dynamic_stiffness(sys.osc2, omega)
    return TransferMatrix(
        t11=b2 / det,
        t12=(sys.coupling / sys.osc1.mass) / det,
        t21=(sys.coupling / sys.osc2.mass) / det,
        t22=b1 / det,
    )
