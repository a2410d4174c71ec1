"""Parameter containers, validation and unit reduction.

Two damped harmonic oscillators, bilinearly coupled with strength
``coupling`` (units g (rad/s)^2 in CGS), each attached to its own
independent heat bath.  All downstream numerics run in reduced units:
frequencies in units of the first oscillator's eigenfrequency, masses in
units of the first oscillator's mass, coupling in units of
lambda_ref = m1 * omega01^2, temperatures as theta = k_B T / (hbar omega01)
and energies in units of hbar * omega01.  CGS quantities appear only at
the boundaries (config input, report output).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

HBAR = 1.054571817e-27  # erg s
K_BOLTZMANN = 1.380649e-16  # erg / K


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR
    k_boltzmann: float = K_BOLTZMANN

    def __post_init__(self) -> None:
        if not (self.hbar > 0.0) or not (self.k_boltzmann > 0.0):
            raise ValueError("physical constants must be positive")


CONSTANTS = PhysicalConstants()


class BathModel(str, Enum):
    """Bath spectral density profile."""

    FLAT_OHMIC = "flat_ohmic"
    DEBYE = "debye"
    GAUSS = "gauss"


@dataclass(frozen=True)
class OscillatorParams:
    """Mass (g), eigenfrequency omega0 (rad/s), damping gamma (rad/s).

    The damping kernel is frequency independent, mu(omega) = 2 gamma, so
    gamma is half the friction rate.  Only the underdamped regime
    (gamma < omega0) is supported.
    """

    mass: float
    eigenfrequency: float
    damping: float


@dataclass(frozen=True)
class BathSpec:
    """Heat bath attached to one oscillator.

    ``cutoff`` is the upper integration edge Omega_max for the flat_ohmic
    and debye models.  The gauss model ignores it (its support is cut at
    twelve standard deviations instead) and requires ``gauss_sigma``.
    ``temperature`` is in kelvin for CGS configs and equals
    theta = k_B T / (hbar omega01) for reduced configs.
    """

    model: BathModel
    temperature: float
    cutoff: float
    gauss_sigma: float | None = None


@dataclass(frozen=True)
class SystemConfig:
    osc1: OscillatorParams
    osc2: OscillatorParams
    bath1: BathSpec
    bath2: BathSpec
    coupling: float
    units: str = "cgs"  # "cgs" | "reduced"

    @property
    def lambda_ref(self) -> float:
        """Coupling scale m1 * omega01^2."""
        return self.osc1.mass * self.osc1.eigenfrequency**2

    @property
    def critical_coupling(self) -> float:
        """Coupling at which the soft normal mode reaches zero frequency."""
        return (
            self.osc1.eigenfrequency
            * self.osc2.eigenfrequency
            * math.sqrt(self.osc1.mass * self.osc2.mass)
        )

    @property
    def unstable(self) -> bool:
        return self.coupling >= self.critical_coupling


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


class InvalidConfig(ValueError):
    """Raised when a SystemConfig fails validation."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(report.errors))


def _positive(x: float) -> bool:
    # also rejects NaN
    return isinstance(x, (int, float)) and x > 0.0 and math.isfinite(x)


def _nonnegative(x: float) -> bool:
    return isinstance(x, (int, float)) and x >= 0.0 and math.isfinite(x)


def _check_oscillator(name: str, osc: OscillatorParams, errors: list[str]) -> None:
    if not _positive(osc.mass):
        errors.append(f"{name}.mass: must be a positive finite number")
    if not _positive(osc.eigenfrequency):
        errors.append(f"{name}.eigenfrequency: must be a positive finite number")
    if not _nonnegative(osc.damping):
        errors.append(f"{name}.damping: must be a nonnegative finite number")
    elif _positive(osc.eigenfrequency) and osc.damping >= osc.eigenfrequency:
        errors.append(
            f"{name}.damping: overdamped regime (damping >= eigenfrequency) is not supported"
        )


def _check_bath(
    name: str, bath: BathSpec, attached: OscillatorParams, errors: list[str]
) -> None:
    if not isinstance(bath.model, BathModel):
        errors.append(f"{name}.model: unknown bath model {bath.model!r}")
        return
    if not _nonnegative(bath.temperature):
        errors.append(f"{name}.temperature: must be a nonnegative finite number")
    if not _positive(bath.cutoff):
        errors.append(f"{name}.cutoff: must be a positive finite number")
    elif bath.model is not BathModel.GAUSS and _positive(attached.eigenfrequency):
        if bath.cutoff < attached.eigenfrequency:
            errors.append(
                f"{name}.cutoff: must be at least the attached oscillator's eigenfrequency"
            )
    if bath.model is BathModel.GAUSS:
        if bath.gauss_sigma is None or not _positive(bath.gauss_sigma):
            errors.append(
                f"{name}.gauss_sigma: required and must be positive for the gauss model"
            )


def validate(config: SystemConfig) -> ValidationReport:
    """Check a SystemConfig field by field.

    Returns a report with one message per violated constraint.  An
    unstable coupling (coupling >= critical coupling) is a warning, not
    an error: the stationary integrals remain finite at positive damping
    and callers may legitimately probe that regime.
    """
    errors: list[str] = []
    warnings: list[str] = []
    _check_oscillator("osc1", config.osc1, errors)
    _check_oscillator("osc2", config.osc2, errors)
    _check_bath("bath1", config.bath1, config.osc1, errors)
    _check_bath("bath2", config.bath2, config.osc2, errors)
    if not _nonnegative(config.coupling):
        errors.append("coupling: must be a nonnegative finite number")
    if config.units not in ("cgs", "reduced"):
        errors.append(f"units: must be 'cgs' or 'reduced', got {config.units!r}")
    if not errors and config.unstable:
        warnings.append(
            "coupling: at or above the critical coupling, the undamped system "
            "has no stable low-frequency mode"
        )
    return ValidationReport(tuple(errors), tuple(warnings))


@dataclass(frozen=True)
class ReducedSystem:
    """A SystemConfig rescaled to reduced units plus the scales to undo it.

    ``omega_scale`` (rad/s) and ``mass_scale`` (g) are None when the
    source config was already reduced; in that case absolute energies are
    unavailable and results stay in units of hbar * omega01.
    """

    system: SystemConfig
    omega_scale: float | None
    mass_scale: float | None

    @property
    def energy_scale(self) -> float | None:
        """erg per reduced energy unit (hbar * omega01), when known."""
        if self.omega_scale is None:
            return None
        return CONSTANTS.hbar * self.omega_scale


def _reduce_bath(bath: BathSpec, omega_scale: float) -> BathSpec:
    theta = (
        CONSTANTS.k_boltzmann * bath.temperature / (CONSTANTS.hbar * omega_scale)
    )
    sigma = None if bath.gauss_sigma is None else bath.gauss_sigma / omega_scale
    return BathSpec(bath.model, theta, bath.cutoff / omega_scale, sigma)


def _scale_bath(bath: BathSpec, omega_scale: float) -> BathSpec:
    temperature = (
        bath.temperature * CONSTANTS.hbar * omega_scale / CONSTANTS.k_boltzmann
    )
    sigma = None if bath.gauss_sigma is None else bath.gauss_sigma * omega_scale
    return BathSpec(bath.model, temperature, bath.cutoff * omega_scale, sigma)


def to_reduced(config: SystemConfig) -> ReducedSystem:
    """Validate and rescale a config to reduced units.

    Raises InvalidConfig when validation reports errors.  For an already
    reduced config the numbers pass through unchanged and the scales are
    absent.
    """
    report = validate(config)
    if not report.ok:
        raise InvalidConfig(report)
    if config.units == "reduced":
        return ReducedSystem(config, None, None)
    ws = config.osc1.eigenfrequency
    ms = config.osc1.mass

    def reduce_osc(osc: OscillatorParams) -> OscillatorParams:
        return OscillatorParams(osc.mass / ms, osc.eigenfrequency / ws, osc.damping / ws)

    reduced = SystemConfig(
        osc1=reduce_osc(config.osc1),
        osc2=reduce_osc(config.osc2),
        bath1=_reduce_bath(config.bath1, ws),
        bath2=_reduce_bath(config.bath2, ws),
        coupling=config.coupling / (ms * ws**2),
        units="reduced",
    )
    return ReducedSystem(reduced, ws, ms)


def from_reduced(red: ReducedSystem) -> SystemConfig:
    """Undo to_reduced.  Requires the scales recorded at reduction time."""
    if red.omega_scale is None or red.mass_scale is None:
        raise InvalidConfig(
            ValidationReport(
                ("units: cannot convert to CGS without recorded scales",), ()
            )
        )
    ws = red.omega_scale
    ms = red.mass_scale
    sys = red.system

    def scale_osc(osc: OscillatorParams) -> OscillatorParams:
        return OscillatorParams(osc.mass * ms, osc.eigenfrequency * ws, osc.damping * ws)

    return SystemConfig(
        osc1=scale_osc(sys.osc1),
        osc2=scale_osc(sys.osc2),
        bath1=_scale_bath(sys.bath1, ws),
        bath2=_scale_bath(sys.bath2, ws),
        coupling=sys.coupling * ms * ws**2,
        units="cgs",
    )


def swap_system(config: SystemConfig) -> SystemConfig:
    """Exchange the two oscillators together with their baths."""
    return replace(
        config,
        osc1=config.osc2,
        osc2=config.osc1,
        bath1=config.bath2,
        bath2=config.bath1,
    )
