"""Physical constants, dimensioned quantities and the unit grammar.

Everything inside the package works in SI. Units only appear when text is
parsed (config files, CLI flags) or rendered back out.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from types import MappingProxyType


class UnitError(ValueError):
    """Raised for malformed quantity strings or dimension mismatches."""


class Dimension(str, Enum):
    LENGTH = "length"
    TIME = "time"
    TEMPERATURE = "temperature"
    PROBABILITY = "probability"
    DIMENSIONLESS = "dimensionless"
    SPECIFIC_INTENSITY = "specific_intensity"
    CROSS_SECTION = "cross_section"
    NUMBER_DENSITY = "number_density"
    ANGLE = "angle"
    SOLID_ANGLE = "solid_angle"


@dataclass(frozen=True)
class Constants:
    hbar: float = 1.054571817e-34  # J s
    c: float = 299792458.0  # m / s
    k_boltzmann: float = 1.380649e-23  # J / K
    T_cmb: float = 2.726  # K
    n_H_default: float = 1.146e6  # m^-3 (1.146 cm^-3)
    au: float = 149597870700.0  # m, IAU 2012
    parsec: float = 149597870700.0 * 648000.0 / math.pi  # m, IAU 2015
    julian_year: float = 3.15576e7  # s
    ly: float = 299792458.0 * 3.15576e7  # m


CONSTANTS = Constants()

# symbol -> (SI factor, dimension)
UNITS = MappingProxyType(
    {
        "nm": (1e-9, Dimension.LENGTH),
        "um": (1e-6, Dimension.LENGTH),
        "mm": (1e-3, Dimension.LENGTH),
        "cm": (1e-2, Dimension.LENGTH),
        "m": (1.0, Dimension.LENGTH),
        "km": (1e3, Dimension.LENGTH),
        "au": (CONSTANTS.au, Dimension.LENGTH),
        "ly": (CONSTANTS.ly, Dimension.LENGTH),
        "pc": (CONSTANTS.parsec, Dimension.LENGTH),
        "s": (1.0, Dimension.TIME),
        "yr": (CONSTANTS.julian_year, Dimension.TIME),
        "K": (1.0, Dimension.TEMPERATURE),
        "cm^-3": (1e6, Dimension.NUMBER_DENSITY),
        "m^-3": (1.0, Dimension.NUMBER_DENSITY),
    }
)

_QUANTITY_RE = re.compile(
    r"^\s*(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-]?(?:inf|nan))"
    r"\s*(?P<unit>\S+)\s*$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class Quantity:
    value: float
    dimension: Dimension

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise UnitError(f"quantity value must be finite, got {self.value!r}")
        if self.dimension is Dimension.PROBABILITY and not 0.0 <= self.value <= 1.0:
            raise UnitError(f"probability out of [0, 1]: {self.value!r}")

    def to(self, unit: str) -> float:
        factor, dim = _lookup(unit)
        if dim is not self.dimension:
            raise UnitError(f"cannot express {self.dimension.value} in {unit!r}")
        return self.value / factor


def _lookup(unit: str) -> tuple[float, Dimension]:
    try:
        return UNITS[unit]
    except KeyError:
        raise UnitError(f"unknown unit {unit!r}; expected one of {', '.join(UNITS)}") from None


def parse_quantity(text: str) -> Quantity:
    """Parse ``"<number><space?><unit>"`` into an SI-normalized Quantity.

    >>> parse_quantity("300 nm").value
    3e-07
    """
    m = _QUANTITY_RE.match(text)
    if m is None:
        raise UnitError(f"cannot parse quantity {text!r}")
    number = float(m.group("num"))
    if not math.isfinite(number):
        raise UnitError(f"non-finite number in {text!r}")
    factor, dim = _lookup(m.group("unit"))
    # decimal product so "300 nm" is exactly the float nearest 3e-7
    value = float(Decimal(m.group("num")) * Decimal(repr(factor)))
    if number < 0 and dim in (Dimension.LENGTH, Dimension.TEMPERATURE, Dimension.NUMBER_DENSITY):
        raise UnitError(f"negative {dim.value} not allowed: {text!r}")
    return Quantity(value, dim)


def format_quantity(q: Quantity, unit: str, digits: int = 5) -> str:
    """Render ``q`` in ``unit`` with ``digits`` significant figures.

    Trailing zeros are dropped, so 1.0019e5 m in km reads ``"100.19 km"``.
    Use ``digits=17`` for a lossless round trip through :func:`parse_quantity`.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    return f"{q.to(unit):.{digits}g} {unit}"


def si_string(value: float, dimension: Dimension) -> str:
    """Lossless string form in the base SI unit, used in JSON output."""
    base = {Dimension.LENGTH: "m", Dimension.TIME: "s", Dimension.TEMPERATURE: "K"}[dimension]
    return f"{value!r} {base}"
