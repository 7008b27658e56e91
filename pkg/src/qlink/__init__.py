"""Feasibility analysis for interstellar quantum communication links.

Modules
-------
units
    Constants, quantities and the unit grammar.
beam
    Gaussian-beam geometry and the minimum telescope diameter.
extinction
    Interstellar extinction curves and ground-based atmospheric bands.
background
    Background-photon depolarization and the wavelength bounds it implies.
channels
    Erasure capacity, threshold verdicts, relays and two-way latency.
feasibility
    Scenario evaluation, wavelength scans and minimum designs.
montecarlo
    Seeded photon-level simulation of the analytic probabilities.
cli
    ``qlink`` command-line interface.
"""

__version__ = "0.1.0"

from .beam import joint_catch_probability, min_diameter
from .background import max_wavelength
from .feasibility import Scenario, evaluate_scenario, load_scenario

__all__ = [
    "Scenario",
    "evaluate_scenario",
    "joint_catch_probability",
    "load_scenario",
    "max_wavelength",
    "min_diameter",
]
