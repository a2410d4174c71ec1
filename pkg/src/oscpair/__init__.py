"""Stationary energies of two coupled damped oscillators in independent heat baths."""

from .analysis import (
    ModeSet,
    Stability,
    SweepTable,
    critical_coupling,
    find_peaks,
    normal_modes,
    sweep_coupling,
    sweep_frequency_ratio,
)
from .discrete_bath import (
    DiscreteBath,
    build_bath,
    energy_1_discrete,
    energy_2_discrete,
    interaction_discrete,
)
from .energies import (
    EnergyReport,
    NonConvergedQuadrature,
    Spectrum,
    energy_report,
    equilibrium_single_energy,
    interaction_energy,
    interaction_spectral_density,
    mean_energy_1,
    mean_energy_2,
    sample_spectrum,
)
from .model import (
    CONSTANTS,
    BathModel,
    BathSpec,
    InvalidConfig,
    OscillatorParams,
    PhysicalConstants,
    ReducedSystem,
    SystemConfig,
    ValidationReport,
    from_reduced,
    swap_system,
    to_reduced,
    validate,
)
from .quadrature import (
    IntegrandSpec,
    IntegrationResult,
    integrate,
    resonance_breakpoints,
)
from .response import (
    SingularResponse,
    TransferMatrix,
    dynamic_stiffness,
    mode_energy,
    mode_energy_reduced,
    response_determinant,
    spectral_density,
    transfer_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BathModel",
    "BathSpec",
    "CONSTANTS",
    "DiscreteBath",
    "EnergyReport",
    "IntegrandSpec",
    "IntegrationResult",
    "InvalidConfig",
    "ModeSet",
    "NonConvergedQuadrature",
    "OscillatorParams",
    "PhysicalConstants",
    "ReducedSystem",
    "SingularResponse",
    "Spectrum",
    "Stability",
    "SweepTable",
    "SystemConfig",
    "TransferMatrix",
    "ValidationReport",
    "build_bath",
    "critical_coupling",
    "dynamic_stiffness",
    "energy_1_discrete",
    "energy_2_discrete",
    "energy_report",
    "equilibrium_single_energy",
    "find_peaks",
    "from_reduced",
    "integrate",
    "interaction_discrete",
    "interaction_energy",
    "interaction_spectral_density",
    "mean_energy_1",
    "mean_energy_2",
    "mode_energy",
    "mode_energy_reduced",
    "normal_modes",
    "resonance_breakpoints",
    "response_determinant",
    "sample_spectrum",
    "spectral_density",
    "swap_system",
    "sweep_coupling",
    "sweep_frequency_ratio",
    "to_reduced",
    "transfer_matrix",
    "validate",
]
