"""Finite-bath sums that converge to the continuum energy integrals.

The continuum limit replaces a sum over bath oscillators with a spectral
density: a uniform midpoint grid omega_j = (j - 1/2) d with weights
w_j = (2/pi) rho(omega_j) d turns sum w_j f(omega_j) into
(2/pi) int rho f domega.  The factor-of-two ledger then closes exactly:
the one-half prefactor of the oscillator energies becomes the 1/pi of the
continuum forms, and the bare -lam^2/m1m2 prefactor of the interaction
sum becomes -2 lam^2/m1m2 over pi.  That consistency is what these sums
exist to cross-check; they share the response kernels with the continuum
path but none of its quadrature machinery, and for CGS configs they run
directly in CGS arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import BathModel, BathSpec, OscillatorParams, SystemConfig, swap_system
from .response import (
    dynamic_stiffness,
    mode_energy,
    mode_energy_reduced,
    spectral_density,
)

_GAUSS_SUPPORT_SIGMAS = 12.0


@dataclass(frozen=True)
class DiscreteBath:
    """Midpoint frequency grid with continuum-matched coupling weights."""

    frequencies: np.ndarray
    weights: np.ndarray
    count: int
    source: BathSpec


def build_bath(bath: BathSpec, attached: OscillatorParams, n: int) -> DiscreteBath:
    """Discretize a bath into n oscillators on a uniform midpoint grid.

    The grid spans [0, cutoff] for flat_ohmic and debye; the gauss model
    uses the same upper edge as its continuum support, eigenfrequency
    plus twelve sigma.  Doubling n halves the spacing and the sums
    approach the continuum integrals at second order for grid-resolved
    integrands.
    """
    if n < 2:
        raise ValueError("build_bath requires n >= 2")
    if bath.model is BathModel.GAUSS:
        if bath.gauss_sigma is None:
            raise ValueError("gauss model requires gauss_sigma")
        omega_max = attached.eigenfrequency + _GAUSS_SUPPORT_SIGMAS * bath.gauss_sigma
    else:
        omega_max = bath.cutoff
    d = omega_max / n
    freqs = (np.arange(n) + 0.5) * d
    weights = (2.0 / math.pi) * spectral_density(bath, attached, freqs) * d
    return DiscreteBath(freqs, weights, n, bath)


def _mode_energies(sys: SystemConfig, omega: np.ndarray, temperature: float):
    if sys.units == "reduced":
        return mode_energy_reduced(omega, temperature)
    return mode_energy(omega, temperature)


def energy_1_discrete(
    sys: SystemConfig, bath1: DiscreteBath, bath2: DiscreteBath
) -> float:
    """Mean energy of the first oscillator from the finite-bath sums."""
    o1, o2 = sys.osc1, sys.osc2
    lam2_masses = sys.coupling**2 / (o1.mass * o2.mass)
    w01sq = o1.eigenfrequency**2

    w = bath1.frequencies
    k2 = dynamic_stiffness(o2, w)
    det2 = np.abs(dynamic_stiffness(o1, w) * k2 - lam2_masses) ** 2
    own = bath1.weights * (
        (w * w + w01sq)
        * _mode_energies(sys, w, sys.bath1.temperature)
        * (k2.real**2 + k2.imag**2)
        / det2
    )

    w = bath2.frequencies
    det2 = np.abs(dynamic_stiffness(o1, w) * dynamic_stiffness(o2, w) - lam2_masses) ** 2
    partner = bath2.weights * (
        (w * w + w01sq) * _mode_energies(sys, w, sys.bath2.temperature) / det2
    )
    pref = sys.coupling**2 / o2.mass**2
    return 0.5 * (pref * float(np.sum(partner)) + float(np.sum(own)))


def energy_2_discrete(
    sys: SystemConfig, bath1: DiscreteBath, bath2: DiscreteBath
) -> float:
    """Mean energy of the second oscillator (mirror of the first)."""
    return energy_1_discrete(swap_system(sys), bath2, bath1)


def interaction_discrete(
    sys: SystemConfig, bath1: DiscreteBath, bath2: DiscreteBath
) -> float:
    """Mean interaction energy from the finite-bath sums."""
    o1, o2 = sys.osc1, sys.osc2
    lam2_masses = sys.coupling**2 / (o1.mass * o2.mass)

    w = bath1.frequencies
    k2 = dynamic_stiffness(o2, w)
    det2 = np.abs(dynamic_stiffness(o1, w) * k2 - lam2_masses) ** 2
    first = bath1.weights * (
        _mode_energies(sys, w, sys.bath1.temperature) * k2.real / det2
    )

    w = bath2.frequencies
    k1 = dynamic_stiffness(o1, w)
    det2 = np.abs(k1 * dynamic_stiffness(o2, w) - lam2_masses) ** 2
    second = bath2.weights * (
        _mode_energies(sys, w, sys.bath2.temperature) * k1.real / det2
    )
    return -lam2_masses * (float(np.sum(first)) + float(np.sum(second)))
