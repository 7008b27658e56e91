import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qlink.beam import min_diameter
from qlink.channels import (
    ChannelVerdict,
    Constraint,
    ErasureBudget,
    RelayMode,
    Tier,
    albi_resolution,
    combine_erasures,
    depolarizing_feasibility,
    erasure_capacity,
    q2_roundtrip_delay,
    relay_count,
    relay_spacing,
)
from qlink.units import CONSTANTS

PC = CONSTANTS.parsec
probs = st.floats(0.0, 1.0)


def test_erasure_capacity():
    assert erasure_capacity(0.0) == 1.0
    assert erasure_capacity(0.25) == 0.5
    assert erasure_capacity(0.5) == 0.0
    assert erasure_capacity(0.9) == 0.0


@given(probs, probs)
def test_erasure_capacity_non_increasing(a, b):
    lo, hi = sorted((a, b))
    assert erasure_capacity(hi) <= erasure_capacity(lo)
    assert (erasure_capacity(a) == 0.0) == (a >= 0.5)


def test_combine():
    assert combine_erasures([]) == 0.0
    assert combine_erasures([0, 0, 0]) == 0.0
    assert combine_erasures([0.5, 0, 0]) == 0.5
    assert combine_erasures([0.2978, 0.1, 0.5]) == pytest.approx(0.68401, abs=1e-5)


@given(st.lists(probs, max_size=6), st.randoms())
def test_combine_permutation(eps, rnd):
    shuffled = list(eps)
    rnd.shuffle(shuffled)
    assert combine_erasures(eps) == pytest.approx(combine_erasures(shuffled), abs=1e-12)


@given(probs, probs)
def test_combine_nesting(a, b):
    assert combine_erasures([a, b]) == pytest.approx(combine_erasures([combine_erasures([a]), b]), abs=1e-15)


def test_budget():
    b = ErasureBudget(0.2978, 0.1, 0.5)
    assert b.combined == pytest.approx(1 - 0.7022 * 0.9 * 0.5, abs=1e-12)
    with pytest.raises(ValueError):
        ErasureBudget(1.2, 0, 0)


def test_verdict_invariants():
    with pytest.raises(ValueError):
        ChannelVerdict(True, False, 0.5, Constraint.NONE)
    with pytest.raises(ValueError):
        ChannelVerdict(False, True, 0.5, Constraint.BEAM)
    assert ChannelVerdict(False, True, 0.0, Constraint.BEAM).tier is Tier.Q2_ONLY


def test_depolarizing_feasibility():
    assert depolarizing_feasibility(0.0) is Tier.Q_POSITIVE
    assert depolarizing_feasibility(0.5) is Tier.Q2_ONLY
    assert depolarizing_feasibility(0.7) is Tier.INFEASIBLE
    # exactly at a threshold stays on the more capable side
    assert depolarizing_feasibility(1 / 3) is Tier.Q_POSITIVE
    assert depolarizing_feasibility(2 / 3) is Tier.Q2_ONLY


@given(probs, probs)
def test_depolarizing_monotone(a, b):
    order = [Tier.Q_POSITIVE, Tier.Q2_ONLY, Tier.INFEASIBLE]
    lo, hi = sorted((a, b))
    assert order.index(depolarizing_feasibility(hi)) >= order.index(depolarizing_feasibility(lo))


def test_delay():
    assert q2_roundtrip_delay(CONSTANTS.ly) == pytest.approx(2 * CONSTANTS.julian_year, rel=1e-15)
    d = q2_roundtrip_delay(1.30 * PC)
    assert d == pytest.approx(2.6761e8, rel=1e-4)
    assert d / CONSTANTS.julian_year == pytest.approx(8.48, abs=5e-3)
    assert q2_roundtrip_delay(2 * PC) == 2 * q2_roundtrip_delay(PC)


def test_relay_spacing():
    assert relay_spacing(100.0, 300e-9, RelayMode.PAPER) == pytest.approx(3e10, rel=1e-15)
    assert relay_spacing(100.0, 300e-9, "exact_eq1") == pytest.approx(4.264e10, rel=1e-3)
    assert relay_spacing(200.0, 300e-9, RelayMode.PAPER) == pytest.approx(4 * 3e10, rel=1e-15)
    # exact mode: each hop sits on the half-catch boundary
    hop = relay_spacing(100.0, 300e-9)
    assert min_diameter(300e-9, hop) == pytest.approx(100.0, rel=1e-12)


def test_relay_count():
    assert relay_count(min_diameter(300e-9, PC) * (1 + 1e-9), 300e-9, PC) == 1
    # ceil(1.30 * 3.0856775814913673e16 / 3e10) with the IAU parsec
    n = relay_count(100.0, 300e-9, 1.30 * PC, "paper_order_of_magnitude")
    assert n == 1337127
    assert n == math.ceil(1.30 * PC / 3e10)
    n_half = relay_count(50.0, 300e-9, 1.30 * PC, "paper_order_of_magnitude")
    assert abs(n_half - 4 * n) <= 4


@given(st.floats(1e-2, 1e6), st.floats(1e-12, 1.0), st.floats(1e3, 1e20), st.sampled_from(list(RelayMode)))
def test_relay_coverage(d, lam, L, mode):
    # keep hop counts well inside exact float integers
    assume(L / relay_spacing(d, lam, mode) < 1e12)
    n = relay_count(d, lam, L, mode)
    assert n >= 1
    assert n * relay_spacing(d, lam, mode) >= L
    if n > 1:
        assert L / (n - 1) > relay_spacing(d, lam, mode)


def test_albi():
    assert albi_resolution(300e-9, PC) == pytest.approx(9.72e-24, rel=1e-3)
    assert albi_resolution(300e-9, 1.2742e7) == pytest.approx(2.354e-14, rel=1e-3)
    assert albi_resolution(600e-9, PC) == 2 * albi_resolution(300e-9, PC)
