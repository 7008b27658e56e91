"""Capacity-level bookkeeping: erasure composition, threshold verdicts, relays."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .beam import MIN_DIAMETER_COEFF
from .units import CONSTANTS


class Tier(str, Enum):
    Q_POSITIVE = "q_positive"
    Q2_ONLY = "q2_only"
    INFEASIBLE = "infeasible"


class Constraint(str, Enum):
    BEAM = "beam"
    EXTINCTION = "extinction"
    ATMOSPHERE = "atmosphere"
    DEPOLARIZATION = "depolarization"
    WAVELENGTH_BOUND = "wavelength_bound"
    NONE = "none"


class RelayMode(str, Enum):
    EXACT = "exact_eq1"
    PAPER = "paper_order_of_magnitude"


@dataclass(frozen=True)
class ErasureBudget:
    extinction_eps: float
    atmosphere_eps: float
    beam_eps: float

    def __post_init__(self):
        for v in (self.extinction_eps, self.atmosphere_eps, self.beam_eps):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"erasure probability out of [0, 1]: {v!r}")

    @property
    def combined(self) -> float:
        return combine_erasures([self.extinction_eps, self.atmosphere_eps, self.beam_eps])

    def as_dict(self) -> dict:
        return {
            "extinction_eps": self.extinction_eps,
            "atmosphere_eps": self.atmosphere_eps,
            "beam_eps": self.beam_eps,
            "combined": self.combined,
        }


@dataclass(frozen=True)
class ChannelVerdict:
    q_positive: bool
    q2_positive: bool
    q_rate_bound: float
    binding_constraint: Constraint

    def __post_init__(self):
        if self.q_positive and not self.q2_positive:
            raise ValueError("q_positive implies q2_positive")
        if (self.q_rate_bound > 0) != self.q_positive:
            raise ValueError("q_rate_bound must be positive exactly when q_positive")

    @property
    def tier(self) -> Tier:
        if self.q_positive:
            return Tier.Q_POSITIVE
        return Tier.Q2_ONLY if self.q2_positive else Tier.INFEASIBLE


def erasure_capacity(eps: float) -> float:
    """Quantum capacity of the erasure channel, ``max(0, 1 - 2 eps)``."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    return 1.0 - 2.0 * eps if eps < 0.5 else 0.0


def combine_erasures(eps_list) -> float:
    """Loss probability of independent mechanisms in series."""
    survive = 1.0
    for eps in eps_list:
        if not 0.0 <= eps <= 1.0:
            raise ValueError(f"eps out of [0, 1]: {eps!r}")
        survive *= 1.0 - eps
    return 1.0 - survive


def depolarizing_feasibility(eps: float, eps_q: float = 1.0 / 3.0, eps_q2: float = 2.0 / 3.0) -> Tier:
    """Threshold verdict for a depolarizing channel; a value exactly at a threshold stays feasible."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    if eps <= eps_q:
        return Tier.Q_POSITIVE
    if eps <= eps_q2:
        return Tier.Q2_ONLY
    return Tier.INFEASIBLE


def q2_roundtrip_delay(distance: float) -> float:
    """Minimum extra latency ``2L/c`` of a protocol that needs a classical reply."""
    if distance <= 0:
        raise ValueError("distance must be positive")
    return 2.0 * distance / CONSTANTS.c


def relay_spacing(diameter: float, wavelength: float, mode: RelayMode | str = RelayMode.EXACT) -> float:
    """Longest hop that optical elements of ``diameter`` can bridge at ``wavelength``.

    ``exact_eq1`` makes each hop sit exactly on the half-catch boundary;
    ``paper_order_of_magnitude`` uses the rounded ``3e10 m`` per (100 m)^2 at 300 nm.
    """
    if diameter <= 0 or wavelength <= 0:
        raise ValueError("diameter and wavelength must be positive")
    mode = RelayMode(mode)
    if mode is RelayMode.PAPER:
        return (diameter / 100.0) ** 2 * (300e-9 / wavelength) * 3e10
    return diameter**2 / (MIN_DIAMETER_COEFF * wavelength)


def relay_count(diameter: float, wavelength: float, distance: float, mode: RelayMode | str = RelayMode.EXACT) -> int:
    """Smallest number of hops ``n`` with ``distance / n <= relay_spacing``."""
    if distance <= 0:
        raise ValueError("distance must be positive")
    spacing = relay_spacing(diameter, wavelength, mode)
    n = max(1, math.ceil(distance / spacing))
    # guard against ceil() landing one short after rounding
    while distance / n > spacing:
        n += 1
    return n


def albi_resolution(wavelength: float, baseline: float) -> float:
    """Diffraction-limited angular resolution ``lambda / baseline`` in radians."""
    if wavelength <= 0 or baseline <= 0:
        raise ValueError("wavelength and baseline must be positive")
    return wavelength / baseline
