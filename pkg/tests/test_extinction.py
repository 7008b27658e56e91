import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlink.extinction import (
    AtmosphereBands,
    ExtinctionCurve,
    atmosphere_blocked,
    extinction_probability,
    load_atmosphere_bands,
    load_extinction_curve,
    max_extinction_distance,
    sigma_at,
)
from qlink.tabular import DataError, RangeError, resolve_data_path
from qlink.units import CONSTANTS

PC = CONSTANTS.parsec


def write(tmp_path, text, name="curve.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_minimal(tmp_path):
    p = write(tmp_path, "# comment\nwavelength_m,sigma_m2\n1e-7,1e-25\n1e-6,1e-26  # trailing\n")
    curve = load_extinction_curve(p)
    assert curve.samples == [(1e-7, 1e-25), (1e-6, 1e-26)]


def test_load_unsorted_names_line(tmp_path):
    p = write(tmp_path, "wavelength_m,sigma_m2\n1e-6,1e-26\n1e-7,1e-25\n")
    with pytest.raises(DataError, match=r":3:"):
        load_extinction_curve(p)


@pytest.mark.parametrize(
    "body",
    [
        "wavelength_m,sigma_m2\n1e-6,-1\n1e-5,0\n",
        "lambda,sigma\n1e-6,1\n1e-5,1\n",
        "wavelength_m,sigma_m2\n1e-6,1e-26\n",
        "wavelength_m,sigma_m2\n1e-6,abc\n1e-5,1\n",
        "",
    ],
)
def test_load_rejects(tmp_path, body):
    with pytest.raises(DataError):
        load_extinction_curve(write(tmp_path, body))


def test_bundled_dataset():
    curve = load_extinction_curve(resolve_data_path("builtin:illustrative", "extinction"))
    assert len(curve.samples) > 50
    lo, hi = curve.range
    assert lo <= 1e-12 and hi >= 1.0


def test_sigma_at_interpolation():
    curve = ExtinctionCurve((1e-7, 1e-6, 1e-5), (1e-24, 1e-26, 0.0))
    assert sigma_at(curve, 1e-6) == 1e-26
    mid = math.sqrt(1e-7 * 1e-6)
    assert sigma_at(curve, mid) == pytest.approx(math.sqrt(1e-24 * 1e-26), rel=1e-12)
    # zero endpoint: linear on that segment
    assert sigma_at(curve, 5.5e-6) == pytest.approx(0.5e-26, rel=1e-12)
    with pytest.raises(RangeError):
        sigma_at(curve, 1e-4)


@given(st.floats(1e-7, 1e-5))
def test_sigma_between_brackets(lam):
    curve = ExtinctionCurve((1e-7, 1e-6, 1e-5), (1e-24, 1e-26, 3e-27))
    s = sigma_at(curve, lam)
    assert 3e-27 * (1 - 1e-12) <= s <= 1e-24 * (1 + 1e-12)


def test_extinction_probability_examples(transparent_curve, flat_curve):
    assert extinction_probability(transparent_curve, 5e-7, PC, 1.146e6) == 0.0
    L_half = math.log(2) / (1.146e6 * 1e-26)
    assert extinction_probability(flat_curve, 5e-7, L_half, 1.146e6) == pytest.approx(0.5, rel=1e-14)
    # tau = 1.146e6 * 1e-26 * 3.0857e16 = 3.5362e-4, so 1 - exp(-tau) = 3.5356e-4
    assert extinction_probability(flat_curve, 5e-7, PC, 1.146e6) == pytest.approx(3.5356e-4, rel=1e-4)
    # tau = 0.353619 needs sigma = 1e-23 m^2
    assert extinction_probability(flat_curve, 5e-7, 1000 * PC, 1.146e6) == pytest.approx(0.29782, abs=5e-5)


def test_max_extinction_distance(transparent_curve, flat_curve):
    assert max_extinction_distance(flat_curve, 5e-7, 1.146e6) == pytest.approx(6.0485e19, rel=1e-4)
    assert max_extinction_distance(flat_curve, 5e-7, 1.146e6) / PC == pytest.approx(1960, rel=1e-3)
    assert max_extinction_distance(flat_curve, 5e-7, 2 * 1.146e6) == pytest.approx(
        max_extinction_distance(flat_curve, 5e-7, 1.146e6) / 2, rel=1e-15
    )
    unit = ExtinctionCurve((1.0, 2.0), (math.log(2), math.log(2)))
    assert max_extinction_distance(unit, 1.5, 1.0) == pytest.approx(1.0, rel=1e-15)
    assert max_extinction_distance(transparent_curve, 5e-7, 1.146e6) == math.inf


@given(st.floats(0, 1e20), st.floats(0, 1e20))
def test_path_composition(l1, l2):
    curve = ExtinctionCurve((1.0, 2.0), (1e-26, 1e-26))
    p1 = extinction_probability(curve, 1.5, l1, 1.146e6)
    p2 = extinction_probability(curve, 1.5, l2, 1.146e6)
    p12 = extinction_probability(curve, 1.5, l1 + l2, 1.146e6)
    assert 0 <= p12 < 1 or p12 == 1.0
    assert p12 >= max(p1, p2) - 1e-15
    assert abs((1 - p12) - (1 - p1) * (1 - p2)) <= 1e-12 * max(1 - p12, 1e-300) + 1e-15


def test_atmosphere_bands(tmp_path):
    bands = AtmosphereBands(((1e-13, 3.2e-7), (1.4e-5, 3.5e-4)))
    assert atmosphere_blocked(bands, 1e-7)
    assert not atmosphere_blocked(bands, 3.2e-7)
    assert atmosphere_blocked(bands, 1e-13)
    assert not atmosphere_blocked(bands, 5e-7)
    assert not atmosphere_blocked(AtmosphereBands(), 1e-7)
    with pytest.raises(DataError):
        AtmosphereBands(((1.0, 2.0), (1.5, 3.0)))
    p = write(tmp_path, "lo_m,hi_m\n1e-13,3.2e-7\n3e-7,1e-6\n", "bands.csv")
    with pytest.raises(DataError, match=":3:"):
        load_atmosphere_bands(p)
    bundled = load_atmosphere_bands(resolve_data_path("builtin:illustrative", "atmosphere"))
    assert atmosphere_blocked(bundled, 300e-9) and not atmosphere_blocked(bundled, 320e-9)
