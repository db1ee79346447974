"""Doppler broadening: thermal frequency-shift distribution and averaging.

Atoms moving along the beams see both optical fields shifted by the same
amount (co-propagating, nearly degenerate wavelengths), so a velocity class
shifts delta_p and delta_c together and preserves the two-photon detuning.
The shift distribution is the 1-D Maxwell-Boltzmann Gaussian with standard
deviation sqrt(kT/m)/lambda0, converted to linewidth units through the
configured linewidth-in-Hz anchor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.constants import atomic_mass, k as BOLTZMANN_K

#: Atomic mass of 87Rb in kg.
RB87_MASS_KG = 86.909180531 * atomic_mass
#: D2-line transition wavelength in meters.
D2_WAVELENGTH_M = 780.241e-9
#: Natural linewidth used to express shifts in dimensionless rate units.
GAMMA3_HZ_DEFAULT = 6.0e6

__all__ = [
    "RB87_MASS_KG",
    "D2_WAVELENGTH_M",
    "GAMMA3_HZ_DEFAULT",
    "DopplerConfig",
    "VelocityClass",
    "doppler_sigma",
    "velocity_grid",
    "doppler_average",
]


@dataclass(frozen=True)
class DopplerConfig:
    """Thermal ensemble and quadrature settings for the shift average.

    temperature/mass/wavelength0 are SI; n_samples must be odd so the
    zero-shift class is sampled, and the uniform grid spans
    +/- cutoff_sigmas standard deviations.  The n_samples default is sized
    for the worst case of zero ground decoherence, where far-detuned classes
    contribute near-singular Raman features and coarser grids leave visible
    quadrature ripple near two-photon resonance.
    """

    temperature: float = 320.0
    mass: float = RB87_MASS_KG
    wavelength0: float = D2_WAVELENGTH_M
    n_samples: int = 801
    cutoff_sigmas: float = 4.0
    gamma3_hz: float = GAMMA3_HZ_DEFAULT

    def __post_init__(self) -> None:
        for name in ("temperature", "mass", "wavelength0", "gamma3_hz"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.n_samples < 3 or self.n_samples % 2 == 0:
            raise ValueError(f"n_samples must be odd and >= 3, got {self.n_samples}")
        if self.cutoff_sigmas < 3:
            raise ValueError(f"cutoff_sigmas must be >= 3, got {self.cutoff_sigmas}")


@dataclass(frozen=True)
class VelocityClass:
    """One quadrature node: frequency shift (rate units) and its weight."""

    shift: float
    weight: float


def doppler_sigma(config: DopplerConfig) -> float:
    """Standard deviation of the thermal frequency-shift Gaussian, in rate units."""
    sigma_hz = np.sqrt(BOLTZMANN_K * config.temperature / config.mass) / config.wavelength0
    return float(sigma_hz / config.gamma3_hz)


def velocity_grid(config: DopplerConfig) -> list[VelocityClass]:
    """Uniform trapezoidal grid over the shift Gaussian, weights summing to one."""
    sigma = doppler_sigma(config)
    shifts = np.linspace(-config.cutoff_sigmas * sigma, config.cutoff_sigmas * sigma, config.n_samples)
    weights = np.exp(-0.5 * (shifts / sigma) ** 2)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    weights /= weights.sum()
    return [VelocityClass(float(s), float(w)) for s, w in zip(shifts, weights)]


def doppler_average(
    chi_at_shift: Callable[[float], complex],
    grid: Sequence[VelocityClass],
) -> complex:
    """Weighted sum of chi over the velocity classes, in fixed grid order.

    Solver errors raised by the integrand are re-raised annotated with the
    offending shift.
    """
    total = 0.0 + 0.0j
    for vc in grid:
        try:
            total += vc.weight * chi_at_shift(vc.shift)
        except Exception as exc:
            exc.args = (f"{exc.args[0] if exc.args else exc!r} [at Doppler shift {vc.shift:g}]",)
            raise
    return complex(total)
