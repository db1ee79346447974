"""Closed-form weak-probe references used to validate the numerical solver.

Both formulas use the convention that the named decay rates are population
rates whose halves damp the corresponding coherence, and they share the
susceptibility normalization chi = rho_eg / omega_probe of the solver.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ThreeLevelParams", "chi_two_level", "chi_three_level"]


@dataclass(frozen=True)
class ThreeLevelParams:
    """Reduced Lambda system: one excited state, coupling field, two decays."""

    omega_c: float
    delta_c: float = 0.0
    gamma31: float = 1.0
    gamma21: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma31 < 0 or self.gamma21 < 0:
            raise ValueError("decay rates must be >= 0")


def chi_two_level(delta_p: float, gamma31: float) -> complex:
    """Weak-probe Lorentzian of a closed two-level transition."""
    if gamma31 <= 0:
        raise ValueError(f"gamma31 must be > 0, got {gamma31}")
    return (0.5j) / (0.5 * gamma31 - 1j * delta_p)


def chi_three_level(params: ThreeLevelParams, delta_p: float) -> complex:
    """Weak-probe susceptibility of the driven Lambda system.

    The coupling term pushes the bare Lorentzian pole off resonance and opens
    the transparency window at two-photon resonance; with omega_c = 0 this
    reduces exactly to chi_two_level.
    """
    two_photon = 0.5 * params.gamma21 - 1j * (delta_p - params.delta_c)
    denom = 0.5 * params.gamma31 - 1j * delta_p
    if params.omega_c != 0.0:
        if two_photon == 0.0:
            # exact two-photon resonance with no ground decoherence: the
            # coupling term diverges and the medium is perfectly transparent
            return 0.0 + 0.0j
        denom = denom + (params.omega_c**2 / 4.0) / two_photon
    return (0.5j) / denom
