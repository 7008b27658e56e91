"""Photon loss to interstellar extinction and to the Earth's atmosphere."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .tabular import DataError, loglog_interp, read_spectrum, read_two_column_csv

EXTINCTION_HEADER = ("wavelength_m", "sigma_m2")
BANDS_HEADER = ("lo_m", "hi_m")


@dataclass(frozen=True)
class ExtinctionCurve:
    """Extinction cross-section per hydrogen atom, sampled in wavelength."""

    wavelengths: tuple[float, ...]
    sigmas: tuple[float, ...]
    name: str = ""
    source: str = ""

    def __post_init__(self):
        if len(self.wavelengths) != len(self.sigmas) or len(self.wavelengths) < 2:
            raise DataError("extinction curve needs >= 2 paired samples")
        if any(b <= a for a, b in zip(self.wavelengths, self.wavelengths[1:])):
            raise DataError("extinction curve wavelengths must be strictly increasing")
        if self.wavelengths[0] <= 0 or any(s < 0 for s in self.sigmas):
            raise DataError("extinction curve needs positive wavelengths and sigma >= 0")

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.wavelengths, self.sigmas))

    @property
    def range(self) -> tuple[float, float]:
        return self.wavelengths[0], self.wavelengths[-1]


@dataclass(frozen=True)
class AtmosphereBands:
    """Half-open wavelength intervals ``[lo, hi)`` that are opaque from the ground."""

    blocked: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        prev_hi = -math.inf
        for lo, hi in self.blocked:
            if not lo < hi:
                raise DataError(f"band [{lo!r}, {hi!r}) has lo >= hi")
            if lo < prev_hi:
                raise DataError(f"band [{lo!r}, {hi!r}) overlaps or is out of order")
            prev_hi = hi


def load_extinction_curve(path: str | Path, name: str | None = None) -> ExtinctionCurve:
    xs, ys = read_spectrum(path, EXTINCTION_HEADER)
    path = Path(path)
    return ExtinctionCurve(xs, ys, name=name or path.stem, source=str(path))


def load_atmosphere_bands(path: str | Path) -> AtmosphereBands:
    bands = []
    prev_hi = -math.inf
    for lineno, lo, hi in read_two_column_csv(path, BANDS_HEADER):
        if not lo < hi:
            raise DataError(f"{path}:{lineno}: lo must be < hi")
        if lo < prev_hi:
            raise DataError(f"{path}:{lineno}: band overlaps or is out of order")
        prev_hi = hi
        bands.append((lo, hi))
    return AtmosphereBands(tuple(bands))


def sigma_at(curve: ExtinctionCurve, wavelength: float) -> float:
    return loglog_interp(curve.wavelengths, curve.sigmas, wavelength)


def optical_depth(curve: ExtinctionCurve, wavelength: float, distance: float, n_H: float) -> float:
    if distance < 0 or n_H < 0:
        raise ValueError("distance and n_H must be non-negative")
    return n_H * sigma_at(curve, wavelength) * distance


def extinction_probability(curve: ExtinctionCurve, wavelength: float, distance: float, n_H: float) -> float:
    """Beer-Lambert loss probability ``1 - exp(-n_H sigma L)``."""
    return -math.expm1(-optical_depth(curve, wavelength, distance, n_H))


def max_extinction_distance(curve: ExtinctionCurve, wavelength: float, n_H: float) -> float:
    """Distance at which extinction loss reaches 1/2; ``inf`` where the medium is transparent."""
    tau_per_m = n_H * sigma_at(curve, wavelength)
    if tau_per_m == 0:
        return math.inf
    return math.log(2.0) / tau_per_m


def atmosphere_blocked(bands: AtmosphereBands, wavelength: float) -> bool:
    return any(lo <= wavelength < hi for lo, hi in bands.blocked)
