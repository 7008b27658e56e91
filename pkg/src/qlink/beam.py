"""Gaussian-beam geometry and the aperture-catch bound on telescope size.

A photon whose transverse wavefunction saturates the position/momentum
uncertainty relation has radial density ``exp(-rho^2 / 2 dx^2) / (2 pi dx^2)``
at each end of the path, with ``dx1 * dx2 = lambda L / 4 pi``. The probability
that it overlaps both apertures is the product of two disk catch factors,
maximized over how the uncertainty is split between the two ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# (1/pi) ln(2 / (3 - 2 sqrt 2)): D_min^2 = MIN_DIAMETER_COEFF * lambda * L
MIN_DIAMETER_COEFF = math.log(2.0 / (3.0 - 2.0 * math.sqrt(2.0))) / math.pi

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class ConvergenceError(ArithmeticError):
    """The aperture-split optimizer failed to reach its tolerance."""


@dataclass(frozen=True)
class BeamGeometry:
    wavelength: float
    waist_radius: float
    wavenumber: float = field(init=False)
    rayleigh_range: float = field(init=False)

    def __post_init__(self):
        if not (self.wavelength > 0 and self.waist_radius > 0):
            raise ValueError("wavelength and waist_radius must be positive")
        k = 2.0 * math.pi / self.wavelength
        object.__setattr__(self, "wavenumber", k)
        object.__setattr__(self, "rayleigh_range", 2.0 * k * self.waist_radius**2)


@dataclass(frozen=True)
class AperturePair:
    d1: float
    d2: float

    def __post_init__(self):
        if not (self.d1 > 0 and self.d2 > 0):
            raise ValueError("aperture diameters must be positive")

    @property
    def geometric_mean(self) -> float:
        return math.sqrt(self.d1 * self.d2)


def beam_radius(g: BeamGeometry, z: float) -> float:
    """Gaussian beam radius a distance ``z`` from the waist."""
    return g.waist_radius * math.sqrt(1.0 + (z / g.rayleigh_range) ** 2)


def min_radius_product(wavelength: float, distance: float) -> float:
    """Lower bound on the product of beam radii at two points ``distance`` apart."""
    return wavelength * distance / (4.0 * math.pi)


def optimal_waist(wavelength: float, distance: float) -> float:
    """Waist radius that minimizes ``sigma(-L/2) * sigma(+L/2)`` for a midpoint waist."""
    return math.sqrt(wavelength * distance / (8.0 * math.pi))


def catch_probability(aperture_d: float, sigma: float) -> float:
    """Fraction of a radial Gaussian of width ``sigma`` inside a disk of diameter ``aperture_d``."""
    if aperture_d < 0 or sigma <= 0:
        raise ValueError("need aperture_d >= 0 and sigma > 0")
    return -math.expm1(-(aperture_d**2) / (8.0 * sigma**2))


def _log_catch(aperture_d: float, sigma: float) -> float:
    x = aperture_d**2 / (8.0 * sigma**2)
    if x == 0.0:
        return -math.inf
    return math.log(-math.expm1(-x))


def golden_section_max(f, lo: float, hi: float, rtol: float = 1e-12, max_iter: int = 500):
    """Maximize a unimodal ``f`` on ``[lo, hi]``. Returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= rtol * max(1.0, abs(a) + abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    else:
        raise ConvergenceError(f"golden-section search did not converge in {max_iter} steps")
    if fc >= fd:
        return c, fc
    return d, fd


def optimal_split(ap: AperturePair, wavelength: float, distance: float) -> tuple[float, float, float]:
    """Best ``(dx1, dx2, probability)`` under ``dx1 * dx2 = lambda L / 4 pi``.

    The split is searched in ``log dx1``; symmetry between the two ends is
    not assumed.
    """
    if not (wavelength > 0 and distance > 0):
        raise ValueError("wavelength and distance must be positive")
    product = min_radius_product(wavelength, distance)
    log_p = math.log(product)

    def objective(u: float) -> float:
        dx1 = math.exp(u)
        return _log_catch(ap.d1, dx1) + _log_catch(ap.d2, product / dx1)

    centre = 0.5 * log_p
    half_width = abs(math.log(ap.d1 / ap.d2)) + 40.0
    u, logp = golden_section_max(objective, centre - half_width, centre + half_width)
    dx1 = math.exp(u)
    return dx1, product / dx1, math.exp(logp)


def joint_catch_probability(ap: AperturePair, wavelength: float, distance: float) -> float:
    """Maximum probability that one photon is caught at both apertures."""
    return optimal_split(ap, wavelength, distance)[2]


def min_diameter(wavelength: float, distance: float) -> float:
    """Geometric-mean diameter at which the joint catch probability is exactly 1/2."""
    if not (wavelength > 0 and distance > 0):
        raise ValueError("wavelength and distance must be positive")
    return math.sqrt(MIN_DIAMETER_COEFF * wavelength * distance)


def required_partner_diameter(d1: float, wavelength: float, distance: float) -> float:
    if d1 <= 0:
        raise ValueError("d1 must be positive")
    return min_diameter(wavelength, distance) ** 2 / d1
