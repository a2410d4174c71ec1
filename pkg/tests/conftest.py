"""Shared builders for test systems.

Everything below uses the reference operating point of the studies this
package reproduces: 1e-23 g masses and a 1e13 rad/s first eigenfrequency,
which puts the coupling reference m1 * omega01^2 at 1000 in CGS.
"""

from oscpair import BathModel, BathSpec, OscillatorParams, SystemConfig

W01 = 1e13  # rad/s
MASS = 1e-23  # g
LAMBDA0 = MASS * W01**2


def make_system(
    *,
    w02_ratio: float = 1.3,
    damping_frac: float = 0.02,
    coupling_frac: float = 0.1,
    t1: float = 300.0,
    t2: float = 700.0,
    model: BathModel = BathModel.DEBYE,
    cutoff_ratio: float = 30.0,
    sigma_frac: float | None = None,
) -> SystemConfig:
    """CGS two-oscillator system; fractions are relative to omega01/lambda0.

    Damping scales with each oscillator's own eigenfrequency and, for the
    Gauss bath, so does the density width.
    """
    osc1 = OscillatorParams(MASS, W01, damping_frac * W01)
    osc2 = OscillatorParams(MASS, w02_ratio * W01, damping_frac * w02_ratio * W01)

    def bath(temp: float, attached: OscillatorParams) -> BathSpec:
        sigma = None
        if sigma_frac is not None:
            sigma = sigma_frac * attached.eigenfrequency
        return BathSpec(model, temp, cutoff_ratio * W01, gauss_sigma=sigma)

    return SystemConfig(
        osc1=osc1,
        osc2=osc2,
        bath1=bath(t1, osc1),
        bath2=bath(t2, osc2),
        coupling=coupling_frac * LAMBDA0,
        units="cgs",
    )
