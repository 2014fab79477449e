import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from reboundcpg.neurons import (
    HHParams,
    HHState,
    RSState,
    hh_derivatives,
    hh_rate_constants,
    hh_resting_state,
    hh_steady_state,
    rs_derivatives,
    rs_resting_state,
)

# ---------------------------------------------------------------------------
# Independent straight transcription of the published rate equations, kept
# deliberately separate from the package implementation.
# ---------------------------------------------------------------------------

def oracle_rates(v):
    am = 0.1 * (v + 40.0) / (1.0 - np.exp(-(v + 40.0) / 10.0))
    bm = 4.0 * np.exp(-(v + 65.0) / 18.0)
    ah = 0.07 * np.exp(-(v + 65.0) / 20.0)
    bh = 1.0 / (1.0 + np.exp(-(v + 35.0) / 10.0))
    an = 0.01 * (v + 55.0) / (1.0 - np.exp(-(v + 55.0) / 10.0))
    bn = 0.125 * np.exp(-(v + 65.0) / 80.0)
    return am, bm, ah, bh, an, bn


def oracle_hh_rhs(v, m, h, n, i_total, p=HHParams()):
    am, bm, ah, bh, an, bn = oracle_rates(v)
    dv = (
        -p.g_na * m**3 * h * (v - p.e_na)
        - p.g_k * n**4 * (v - p.e_k)
        - p.g_l * (v - p.e_l)
        + i_total
    ) / p.c
    # gate form (x_inf - x)/tau_x, algebraically equal to a(1-x) - bx
    dm = (am / (am + bm) - m) * (am + bm)
    dh = (ah / (ah + bh) - h) * (ah + bh)
    dn = (an / (an + bn) - n) * (an + bn)
    return np.array([dv, dm, dh, dn])


def rel_err(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))


# ---------------------------------------------------------------------------
# Rate constants
# ---------------------------------------------------------------------------

def test_alpha_m_removable_singularity_is_exact():
    am = hh_rate_constants(-40.0)[0]
    assert am == 1.0


def test_alpha_n_removable_singularity_is_exact():
    an = hh_rate_constants(-55.0)[4]
    assert an == 0.1


def test_h_rates_at_minus_65():
    _, _, ah, bh, _, _ = hh_rate_constants(-65.0)
    assert ah == pytest.approx(0.07, rel=1e-15)
    # exponent is exactly 3 at -65: 1/(1+e^3)
    assert bh == pytest.approx(0.047425873177566780879, rel=1e-14)


def test_rate_positivity_on_grid():
    grid = np.arange(-120.0, 60.0 + 1e-9, 0.1)
    rates = hh_rate_constants(grid)
    for r in rates:
        assert np.all(r >= 0.0)
        assert np.all(np.isfinite(r))


@pytest.mark.parametrize("v0,which,limit,tols", [
    (-40.0, 0, 1.0, (1e-4, 1e-6)),
    (-55.0, 4, 0.1, (1e-5, 1e-6)),
])
def test_singularity_continuity(v0, which, limit, tols):
    for eps, tol in zip((1e-3, 1e-6), tols):
        for v in (v0 - eps, v0 + eps):
            assert abs(float(hh_rate_constants(v)[which]) - limit) < tol


def test_rates_match_straight_transcription_away_from_singularities():
    vs = np.linspace(-119.7, 59.3, 401)
    ours = hh_rate_constants(vs)
    theirs = oracle_rates(vs)
    for a, b in zip(ours, theirs):
        assert np.max(rel_err(a, b)) < 1e-12


# ---------------------------------------------------------------------------
# Steady states
# ---------------------------------------------------------------------------

def test_steady_state_definitional_identity():
    for v in (-90.0, -65.0, -40.0, 0.0, 40.0):
        am, bm, ah, bh, an, bn = hh_rate_constants(v)
        (mi, tm), (hi, th), (ni, tn) = hh_steady_state(v)
        assert mi == pytest.approx(am / (am + bm), rel=1e-15)
        assert hi == pytest.approx(ah / (ah + bh), rel=1e-15)
        assert ni == pytest.approx(an / (an + bn), rel=1e-15)
        # x_inf / tau_x == alpha_x
        assert mi / tm == pytest.approx(am, rel=1e-14)
        assert hi / th == pytest.approx(ah, rel=1e-14)
        assert ni / tn == pytest.approx(an, rel=1e-14)


def test_steady_state_frozen_values_at_minus_65():
    # high-precision evaluation of the rate formulas (frozen oracle)
    (mi, tm), (hi, th), (ni, tn) = hh_steady_state(-65.0)
    assert mi == pytest.approx(0.052932485257249574965, rel=1e-14)
    assert hi == pytest.approx(0.59612075350846024184, rel=1e-14)
    assert ni == pytest.approx(0.31767691406069738999, rel=1e-14)
    assert tm == pytest.approx(0.23676687868568760626, rel=1e-14)
    assert th == pytest.approx(8.5160107644065748835, rel=1e-14)
    assert tn == pytest.approx(5.4585846875144208801, rel=1e-14)


def test_steady_state_in_open_unit_interval():
    for v in np.linspace(-120, 60, 181):
        for xi, tx in hh_steady_state(v):
            assert 0.0 < xi < 1.0
            assert tx > 0.0


# ---------------------------------------------------------------------------
# HH derivatives
# ---------------------------------------------------------------------------

def test_gate_derivatives_vanish_at_steady_state():
    for v in (-80.0, -65.0, -50.0, 0.0):
        (mi, _), (hi, _), (ni, _) = hh_steady_state(v)
        d = hh_derivatives(HHState(v, float(mi), float(hi), float(ni)), HHParams(), 0.0)
        assert abs(d.m) < 1e-15
        assert abs(d.h) < 1e-15
        assert abs(d.n) < 1e-15


def test_resting_fixed_point_from_independent_root_find():
    p = HHParams()

    def net(v):
        am, bm, ah, bh, an, bn = oracle_rates(v)
        m, h, n = am / (am + bm), ah / (ah + bh), an / (an + bn)
        return (
            -p.g_na * m**3 * h * (v - p.e_na)
            - p.g_k * n**4 * (v - p.e_k)
            - p.g_l * (v - p.e_l)
        )

    v_star = brentq(net, -80.0, -50.0, xtol=1e-13)
    assert v_star == pytest.approx(-64.996379331192057431, abs=1e-9)

    rest = hh_resting_state()
    assert rest.v == pytest.approx(v_star, abs=1e-9)
    d = hh_derivatives(rest, p, 0.0)
    assert abs(d.v) < 1e-9
    assert abs(d.m) < 1e-9 and abs(d.h) < 1e-9 and abs(d.n) < 1e-9


def test_hh_rhs_matches_transcription_on_random_states():
    rng = np.random.default_rng(20240817)
    p = HHParams()
    for _ in range(1000):
        v = rng.uniform(-120.0, 60.0)
        m, h, n = rng.uniform(0.0, 1.0, size=3)
        i_tot = rng.uniform(-50.0, 50.0)
        ours = hh_derivatives(HHState(v, m, h, n), p, i_tot)
        ref = oracle_hh_rhs(v, m, h, n, i_tot, p)
        got = np.array([ours.v, ours.m, ours.h, ours.n])
        assert np.max(rel_err(got, ref)) < 1e-12


@given(
    v=st.floats(min_value=-120.0, max_value=60.0),
    other=st.floats(min_value=0.0, max_value=1.0),
)
def test_gate_bounds_are_invariant(v, other):
    # dx/dt >= 0 at x=0 and <= 0 at x=1 keeps gates inside [0,1]
    p = HHParams()
    at0 = hh_derivatives(HHState(v, 0.0, other, other), p, 0.0)
    at1 = hh_derivatives(HHState(v, 1.0, other, other), p, 0.0)
    assert at0.m >= 0.0 and at1.m <= 0.0
    at0 = hh_derivatives(HHState(v, other, 0.0, other), p, 0.0)
    at1 = hh_derivatives(HHState(v, other, 1.0, other), p, 0.0)
    assert at0.h >= 0.0 and at1.h <= 0.0
    at0 = hh_derivatives(HHState(v, other, other, 0.0), p, 0.0)
    at1 = hh_derivatives(HHState(v, other, other, 1.0), p, 0.0)
    assert at0.n >= 0.0 and at1.n <= 0.0


def test_params_validation():
    with pytest.raises(ValueError):
        HHParams(c=0.0)
    with pytest.raises(ValueError):
        HHParams(g_na=-1.0)
    # defaults are the published constants
    p = HHParams()
    assert (p.c, p.g_na, p.g_k, p.g_l) == (1.0, 120.0, 36.0, 0.3)
    assert (p.e_na, p.e_k, p.e_l) == (50.0, -77.0, -54.387)


# ---------------------------------------------------------------------------
# Reduced (RS) model
# ---------------------------------------------------------------------------

def test_rs_filter_equilibria():
    d = rs_derivatives(RSState(0.7, 0.7, 0.7), u=0.3)
    assert d.v1 == 0.0
    assert d.v2 == 0.0


def test_rs_origin_value():
    # direct evaluation: dv = 2 tanh(-1) - 2 tanh(-1) - tanh(2) = -tanh(2)
    d = rs_derivatives(RSState(0.0, 0.0, 0.0), u=0.0)
    assert d.v == pytest.approx(-0.96402758007581688395, rel=1e-14)
    assert d.v1 == 0.0 and d.v2 == 0.0


def test_rs_rest_cancels_voltage_derivative():
    # at v = v1 the two tanh(.-1) terms cancel; root of -0.5v - tanh(v+2)
    v_star = brentq(lambda v: -0.5 * v - np.tanh(v + 2.0), -5.0, 5.0, xtol=1e-14)
    assert v_star == pytest.approx(-1.2592256069376915111, abs=1e-12)
    d = rs_derivatives(RSState(v_star, v_star, 123.0), u=0.0)
    assert abs(d.v) < 1e-12
    rest = rs_resting_state()
    assert rest.v == pytest.approx(v_star, abs=1e-12)
    assert rest.v1 == rest.v and rest.v2 == rest.v


def test_rs_filter_time_constants():
    d = rs_derivatives(RSState(1.0, 0.0, 0.0), u=0.0)
    assert d.v1 == pytest.approx(1.0 / 30.0, rel=1e-15)
    assert d.v2 == pytest.approx(1.0 / 60.0, rel=1e-15)


@given(
    v=st.floats(min_value=-50, max_value=50),
    v1=st.floats(min_value=-50, max_value=50),
    v2=st.floats(min_value=-50, max_value=50),
    u=st.floats(min_value=-20, max_value=20),
)
def test_rs_finite_for_finite_inputs(v, v1, v2, u):
    d = rs_derivatives(RSState(v, v1, v2), u)
    assert np.isfinite(d.v) and np.isfinite(d.v1) and np.isfinite(d.v2)
