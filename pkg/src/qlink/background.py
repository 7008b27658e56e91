"""Depolarization by diffuse background photons.

Intensities are specific intensities in SI (W m^-2 Hz^-1 sr^-1). The
uncertainty-limited receiver mode collects ``N = I lambda^3 / (128 pi^2 hbar c)``
background photons per signal photon on average, and writing ``N = eps/(1-eps)``
turns that count into a depolarizing probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .tabular import loglog_interp, read_spectrum
from .units import CONSTANTS

HBAR = CONSTANTS.hbar
C = CONSTANTS.c
K_B = CONSTANTS.k_boltzmann

BACKGROUND_HEADER = ("wavelength_m", "intensity_si")

_EXP_OVERFLOW = 700.0


@dataclass(frozen=True)
class DepolarizationThresholds:
    eps_q: float = 1.0 / 3.0
    eps_q2: float = 2.0 / 3.0
    eps_erasure: float = 0.5

    def __post_init__(self):
        if not 0 < self.eps_q < self.eps_q2 < 1:
            raise ValueError("need 0 < eps_q < eps_q2 < 1")


def planck_intensity(T: float, wavelength: float) -> float:
    """Blackbody specific intensity at frequency ``c / wavelength``."""
    if wavelength <= 0 or T < 0:
        raise ValueError("need wavelength > 0 and T >= 0")
    if T == 0:
        return 0.0
    x = 2.0 * math.pi * HBAR * C / (wavelength * K_B * T)
    if x > _EXP_OVERFLOW:
        return 0.0
    return 4.0 * math.pi * HBAR * C / wavelength**3 / math.expm1(x)


def rayleigh_jeans_intensity(T: float, wavelength: float) -> float:
    return 2.0 * K_B * T / wavelength**2


def background_photon_count(I_nu: float, wavelength: float) -> float:
    """Minimum mean number of background photons sharing the signal photon's mode."""
    if I_nu < 0 or wavelength <= 0:
        raise ValueError("need I_nu >= 0 and wavelength > 0")
    return I_nu * wavelength**3 / (128.0 * math.pi**2 * HBAR * C)


def depolarizing_epsilon(N: float) -> float:
    if N < 0:
        raise ValueError("N must be non-negative")
    return N / (1.0 + N)


def _odds(eps_c: float) -> float:
    if not 0 < eps_c < 1:
        raise ValueError("eps_c must lie in (0, 1)")
    return eps_c / (1.0 - eps_c)


def max_intensity(wavelength: float, eps_c: float) -> float:
    """Largest background intensity that keeps the depolarizing probability below ``eps_c``."""
    return _odds(eps_c) * 128.0 * math.pi**2 * HBAR * C / wavelength**3


def max_wavelength(eps_c: float, T: float = CONSTANTS.T_cmb) -> float:
    """Wavelength bound from a Rayleigh-Jeans blackbody background at temperature ``T``."""
    if T <= 0:
        raise ValueError("T must be positive")
    return 64.0 * math.pi**2 * _odds(eps_c) * HBAR * C / (K_B * T)


def max_wavelength_planck(eps_c: float, T: float = CONSTANTS.T_cmb) -> float:
    """Same bound with the full Planck law.

    For a blackbody ``N = 1 / (32 pi (exp(x) - 1))`` with ``x = h nu / kT``,
    so the threshold has a closed form.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    x = math.log1p(1.0 / (32.0 * math.pi * _odds(eps_c)))
    return 2.0 * math.pi * HBAR * C / (K_B * T * x)


def min_sender_intensity(I_nu_background: float, eps_c: float) -> float:
    if I_nu_background < 0:
        raise ValueError("background intensity must be non-negative")
    return I_nu_background / _odds(eps_c)


@dataclass(frozen=True)
class TabulatedComponent:
    name: str
    wavelengths: tuple[float, ...]
    intensities: tuple[float, ...]

    def __call__(self, wavelength: float) -> float:
        return loglog_interp(self.wavelengths, self.intensities, wavelength)


def load_background_component(path: str | Path, name: str | None = None) -> TabulatedComponent:
    xs, ys = read_spectrum(path, BACKGROUND_HEADER)
    return TabulatedComponent(name or Path(path).stem, xs, ys)


@dataclass(frozen=True)
class BackgroundModel:
    """Sum of a CMB blackbody and optional tabulated components.

    ``cmb_law="rayleigh_jeans"`` swaps the Planck law for its long-wavelength
    limit, the form the closed-form wavelength bound is derived from.
    """

    components: tuple[tuple[str, Callable[[float], float]], ...] = ()
    include_cmb: bool = True
    T_cmb: float = CONSTANTS.T_cmb
    cmb_law: str = "planck"
    names: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        if self.cmb_law not in ("planck", "rayleigh_jeans"):
            raise ValueError(f"unknown cmb_law {self.cmb_law!r}")
        names = (("cmb",) if self.include_cmb else ()) + tuple(n for n, _ in self.components)
        object.__setattr__(self, "names", names)

    @classmethod
    def from_components(cls, comps, include_cmb: bool = True, T_cmb: float = CONSTANTS.T_cmb, cmb_law: str = "planck"):
        return cls(tuple((c.name, c) for c in comps), include_cmb=include_cmb, T_cmb=T_cmb, cmb_law=cmb_law)

    def total(self, wavelength: float) -> float:
        total = 0.0
        if self.include_cmb:
            law = planck_intensity if self.cmb_law == "planck" else rayleigh_jeans_intensity
            total = law(self.T_cmb, wavelength)
        for _, fn in self.components:
            total += fn(wavelength)
        return total
