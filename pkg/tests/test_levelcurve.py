"""Arc transit times: the quadrature engine against the shooting oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from flowerwaves.errors import QuadratureError
from flowerwaves.levelcurve import (
    DEFAULT_QUADRATURE,
    WEIGHT_KERNELS,
    QuadratureSpec,
    dT_minus_dq0,
    dT_plus_dq0,
    oracle_period_shoot,
    period_T_minus,
    period_T_plus,
    weighted_level_integral,
)
from flowerwaves.phase_plane import P_STAR, energy_level, potential


def random_levels(count, seed, lo=-0.24, hi=0.5):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p0 = float(rng.uniform(0.05, 0.95))
        q0 = float(rng.uniform(0.005, 0.9))
        if lo < q0 * q0 - potential(p0) < hi:
            out.append((p0, q0))
    return out


def test_outward_arc_matches_shooting():
    for p0, q0 in random_levels(40, seed=11):
        quad_val = period_T_plus(p0, q0)
        shot = oracle_period_shoot(p0, q0, "plus")
        assert quad_val == pytest.approx(shot, rel=1e-9)


def test_inward_arc_matches_shooting():
    for p0, q0 in random_levels(60, seed=13, hi=0.0):
        quad_val = period_T_minus(p0, q0)
        shot = oracle_period_shoot(p0, q0, "minus")
        assert quad_val == pytest.approx(shot, rel=1e-9)


def test_sliver_arc_near_turning_point():
    # start within ~1e-12 of the outer turning point; the transit is tiny
    p0, q0 = 0.95, 1e-6
    val = period_T_plus(p0, q0)
    shot = oracle_period_shoot(p0, q0, "plus")
    assert 0.0 < val < 1e-4
    assert val == pytest.approx(shot, rel=1e-6)


def test_deep_level_near_the_origin():
    p0 = 1e-7
    q0 = math.sqrt(potential(p0)) / 4.0
    assert period_T_plus(p0, q0) == pytest.approx(
        oracle_period_shoot(p0, q0, "plus"), rel=1e-8)
    assert period_T_minus(p0, q0) == pytest.approx(
        oracle_period_shoot(p0, q0, "minus"), rel=1e-8)


def test_unit_weight_is_the_transit_time():
    level = energy_level(0.4, 0.2)
    assert weighted_level_integral(level, "one", "plus") == period_T_plus(0.4, 0.2)
    assert weighted_level_integral(level, "one", "minus") == period_T_minus(0.4, 0.2)


def test_kinetic_weight_is_the_momentum_integral():
    # integral of v du along the arc, checked against adaptive quadrature
    level = energy_level(0.45, 0.25)
    val = weighted_level_integral(level, "v_kinetic", "plus")
    ref, _ = quad(
        lambda u: math.sqrt(max(level.energy + potential(u), 0.0)),
        0.45, level.p_plus, limit=200)
    assert val == pytest.approx(ref, rel=1e-9)


def test_amplitude_weight_against_adaptive_quadrature():
    level = energy_level(0.3, 0.15)
    val = weighted_level_integral(level, "u_squared", "minus")
    ref, _ = quad(
        lambda u: u * u / math.sqrt(level.energy + potential(u)),
        level.p_minus, 0.3, limit=400)
    assert val == pytest.approx(ref, rel=1e-8)


def test_weight_kernel_registry():
    assert set(WEIGHT_KERNELS) == {"one", "u_squared", "u_fourth", "v_kinetic"}
    level = energy_level(0.5, 0.1)
    with pytest.raises(ValueError):
        weighted_level_integral(level, "cube", "plus")
    with pytest.raises(ValueError):
        weighted_level_integral(level, "one", "sideways")


def test_quadrature_defaults():
    assert DEFAULT_QUADRATURE.rel_tol == 1e-11
    assert DEFAULT_QUADRATURE.max_refinements == 30
    assert DEFAULT_QUADRATURE.initial_panels == 8


def test_refinement_cap_raises():
    starved = QuadratureSpec(rel_tol=1e-13, max_refinements=0, initial_panels=1)
    p0 = 1e-6
    q0 = math.sqrt(potential(p0)) / 4.0
    with pytest.raises(QuadratureError):
        period_T_minus(p0, q0, starved)


def test_slope_derivatives_match_differencing():
    h = 1e-6
    for p0, q0 in ((0.3, 0.2), (0.5, 0.05), (0.75, 0.3), (0.2, 0.45)):
        fd = (period_T_plus(p0, q0 + h) - period_T_plus(p0, q0 - h)) / (2 * h)
        assert dT_plus_dq0(p0, q0) == pytest.approx(fd, rel=2e-5)
        if energy_level(p0, q0).is_closed:
            fd = (period_T_minus(p0, q0 + h) - period_T_minus(p0, q0 - h)) / (2 * h)
            assert dT_minus_dq0(p0, q0) == pytest.approx(fd, rel=2e-5)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.70),
       st.floats(min_value=0.01, max_value=1.5))
def test_outward_time_decreases_in_slope(p0, q0):
    assert dT_plus_dq0(p0, q0) < 0.0


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.69),
       st.floats(min_value=0.02, max_value=0.98))
def test_inward_time_increases_in_slope(p0, frac):
    q0 = frac * math.sqrt(potential(p0))
    assert dT_minus_dq0(p0, q0) > 0.0
