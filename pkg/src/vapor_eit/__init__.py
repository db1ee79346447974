"""Steady-state EIT spectra of a four-level double-Lambda atom in warm vapor.

The package solves the driven four-level master equation for its steady
state, extracts the weak-probe susceptibility, averages it over the thermal
Doppler shift distribution, and packages the scans that demonstrate how
ground-state exchange decay restores the transparency that Doppler
broadening destroys when the excited-state splitting is small.
"""

__version__ = "0.1.0"

from .model import AtomParams, ExchangeModel, FieldParams
from .doppler import DopplerConfig
from .scenarios import Scenario, Spectrum, eit_metrics, preset, run_scenario
from .steady import build_liouvillian, propagate, steady_state, susceptibility

__all__ = [
    "__version__",
    "AtomParams",
    "FieldParams",
    "ExchangeModel",
    "DopplerConfig",
    "Scenario",
    "Spectrum",
    "preset",
    "run_scenario",
    "eit_metrics",
    "build_liouvillian",
    "steady_state",
    "propagate",
    "susceptibility",
]
