"""Closed-form kinematics against frozen values and the numerical oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selflock import (
    CentralAngles,
    Configuration,
    DomainError,
    closure_residual,
    joint_state,
    mpf_theta1,
    oracle_roots,
    semi_flat_theta1,
    sweep,
    theta1_of_theta4,
    theta3_of_theta1,
    theta4_of_theta1,
)

UP = Configuration.UP
DOWN = Configuration.DOWN


def test_theta4_frozen_values():
    assert math.degrees(
        theta4_of_theta1(math.radians(89), math.radians(90), UP)
    ) == pytest.approx(0.9998477260772541, abs=1e-12)
    assert math.degrees(
        theta4_of_theta1(math.radians(80), math.radians(90), UP)
    ) == pytest.approx(9.851076116583913, abs=1e-12)
    assert math.degrees(
        theta4_of_theta1(math.radians(89), math.radians(90), DOWN)
    ) == pytest.approx(-0.9998477260772541, abs=1e-12)


def test_theta4_at_zero_is_right_angle():
    for a in (50, 61, 70, 80, 85, 89):
        t4 = theta4_of_theta1(math.radians(a), 0.0, UP)
        assert abs(t4 - math.pi / 2) < 1e-15
        assert theta4_of_theta1(math.radians(a), 0.0, DOWN) == pytest.approx(
            -math.pi / 2, abs=1e-15
        )


def test_theta3_frozen_values():
    assert math.degrees(
        theta3_of_theta1(math.radians(89), math.radians(90), UP)
    ) == pytest.approx(90.01745152066944, abs=1e-12)
    assert math.degrees(
        theta3_of_theta1(math.radians(89), 0.0, UP)
    ) == pytest.approx(2.0, abs=1e-12)


def test_theta3_at_zero_identity():
    for a in (50, 61, 70, 80, 85, 89):
        alpha = math.radians(a)
        t3 = theta3_of_theta1(alpha, 0.0, UP)
        assert abs(t3 - (math.pi - 2 * alpha)) < 1e-10


def test_theta2_equals_theta4():
    for t1 in (-2.0, -0.3, 0.0, 0.7, 2.5):
        st_ = joint_state(math.radians(85), t1, UP)
        assert st_.theta2 == st_.theta4


def test_down_branch_mirrors_up():
    for t1 in (-1.2, 0.4, 2.0):
        su = joint_state(math.radians(80), t1, UP)
        sd = joint_state(math.radians(80), t1, DOWN)
        assert sd.theta1 == su.theta1
        assert sd.theta2 == -su.theta2
        assert sd.theta3 == -su.theta3
        assert sd.theta4 == -su.theta4


def test_branch_ranges():
    for t1 in np.radians(np.arange(-178, 179, 7)):
        assert 0.0 < theta4_of_theta1(math.radians(70), float(t1), UP) < math.pi
        assert -math.pi < theta4_of_theta1(math.radians(70), float(t1), DOWN) < 0.0


def test_alpha_domain():
    with pytest.raises(DomainError):
        theta4_of_theta1(math.radians(91), 0.0, UP)
    with pytest.raises(DomainError):
        theta4_of_theta1(0.0, 0.0, UP)
    # 90 degrees (flat-foldable limit) stays evaluable.
    assert theta4_of_theta1(math.pi / 2, 0.0, UP) == pytest.approx(math.pi / 2)


def test_central_angles_validation():
    with pytest.raises(DomainError):
        CentralAngles(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        CentralAngles(1.0, 1.0, 1.0, math.pi)
    with pytest.raises(DomainError):
        CentralAngles.self_lock(math.radians(45))
    with pytest.raises(DomainError):
        CentralAngles.self_lock(math.radians(90))
    ang = CentralAngles.self_lock(math.radians(80))
    assert ang.alpha34 == ang.alpha41 == math.pi / 2
    assert ang.deficit > 0.0
    assert ang.deficit == pytest.approx(math.radians(20), abs=1e-12)


def test_closure_residual_frozen():
    ang = CentralAngles.self_lock(math.radians(80))
    assert closure_residual(ang, math.radians(45), 0.0) == pytest.approx(
        -0.2919324529868222, abs=1e-15
    )


def test_closure_residual_vanishes_at_closed_form():
    for a in (61, 70, 80, 85, 89):
        ang = CentralAngles.self_lock(math.radians(a))
        for t1 in np.radians(np.arange(-175, 176, 13)):
            for config in (UP, DOWN):
                t4 = theta4_of_theta1(math.radians(a), float(t1), config)
                assert abs(closure_residual(ang, float(t1), t4)) < 1e-9


def test_closure_residual_array_matches_scalar():
    ang = CentralAngles.self_lock(math.radians(85))
    t4s = np.linspace(-3.0, 3.0, 17)
    arr = closure_residual(ang, 0.9, t4s)
    assert arr.shape == (17,)
    for t4, v in zip(t4s, arr):
        assert closure_residual(ang, 0.9, float(t4)) == pytest.approx(
            float(v), abs=1e-15
        )


def test_oracle_roots_frozen():
    ang89 = CentralAngles.self_lock(math.radians(89))
    roots = oracle_roots(ang89, math.radians(90))
    assert len(roots) == 2
    assert math.degrees(roots[0]) == pytest.approx(-0.9998477260772541, abs=1e-6)
    assert math.degrees(roots[1]) == pytest.approx(0.9998477260772541, abs=1e-6)

    ang80 = CentralAngles.self_lock(math.radians(80))
    roots = oracle_roots(ang80, 0.0)
    assert [round(math.degrees(r), 6) for r in roots] == [-90.0, 90.0]


def test_oracle_roots_generic_quad():
    # A non self-locking vertex: all four central angles at 60 degrees.
    ang = CentralAngles(*[math.radians(60)] * 4)
    roots = oracle_roots(ang, math.radians(40))
    assert len(roots) == 2
    assert math.degrees(roots[1]) == pytest.approx(107.89522253524048, abs=1e-6)
    assert roots[0] == pytest.approx(-roots[1], abs=1e-9)


def test_oracle_roots_across_pi_seam():
    # At 89 degrees and theta1 = -178 degrees the two roots sit at about
    # +/-179.98 degrees, in the cell that closes the circle across +/-pi.
    ang = CentralAngles.self_lock(math.radians(89))
    roots = oracle_roots(ang, math.radians(-178))
    assert len(roots) == 2
    closed = theta4_of_theta1(math.radians(89), math.radians(-178), UP)
    best = min(
        min(abs(closed - r), 2 * math.pi - abs(closed - r)) for r in roots
    )
    assert best < 1e-8


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(min_value=46.0, max_value=89.5),
    t1=st.floats(min_value=-178.0, max_value=178.0),
)
def test_oracle_confirms_closed_form(a, t1):
    alpha = math.radians(a)
    ang = CentralAngles.self_lock(alpha)
    roots = oracle_roots(ang, math.radians(t1))
    for config in (UP, DOWN):
        closed = theta4_of_theta1(alpha, math.radians(t1), config)
        best = min(
            min(abs(closed - r), 2 * math.pi - abs(closed - r)) for r in roots
        )
        assert best < 1e-8


@settings(max_examples=120, deadline=None)
@given(
    a=st.floats(min_value=46.0, max_value=89.5),
    t4=st.floats(min_value=1e-3, max_value=math.pi - 1e-3),
)
def test_theta1_of_theta4_round_trip(a, t4):
    alpha = math.radians(a)
    t1 = theta1_of_theta4(alpha, t4, UP)
    assert -math.pi < t1 < math.pi
    assert theta4_of_theta1(alpha, t1, UP) == pytest.approx(t4, abs=1e-9)

    t1d = theta1_of_theta4(alpha, -t4, DOWN)
    assert theta4_of_theta1(alpha, t1d, DOWN) == pytest.approx(-t4, abs=1e-9)


def test_theta1_of_theta4_branch_domain():
    alpha = math.radians(80)
    with pytest.raises(DomainError):
        theta1_of_theta4(alpha, -0.5, UP)
    with pytest.raises(DomainError):
        theta1_of_theta4(alpha, 0.0, UP)
    with pytest.raises(DomainError):
        theta1_of_theta4(alpha, math.pi, UP)
    with pytest.raises(DomainError):
        theta1_of_theta4(alpha, 0.5, DOWN)


def test_mpf_frozen_values():
    g = math.radians(36.5)
    assert math.degrees(mpf_theta1(math.radians(89), g, UP)) == pytest.approx(
        2.702206669484808, abs=1e-9
    )
    assert math.degrees(mpf_theta1(math.radians(85), g, UP)) == pytest.approx(
        13.435177025302762, abs=1e-9
    )
    assert math.degrees(mpf_theta1(math.radians(80), g, UP)) == pytest.approx(
        26.413485546235176, abs=1e-9
    )
    # gamma = 90 degrees is the theta1 = 0 state.
    assert mpf_theta1(math.radians(89), math.pi / 2, UP) == pytest.approx(
        0.0, abs=1e-12
    )
    with pytest.raises(DomainError):
        mpf_theta1(math.radians(89), 0.0, UP)
    with pytest.raises(DomainError):
        mpf_theta1(math.radians(89), math.pi / 2 + 0.01, UP)


def test_mpf_state_reaches_gamma():
    for a in (70, 80, 89):
        for g in (20, 36.5, 60):
            t1 = mpf_theta1(math.radians(a), math.radians(g), UP)
            t4 = theta4_of_theta1(math.radians(a), t1, UP)
            assert t4 == pytest.approx(math.radians(g), abs=1e-9)


def test_semi_flat_frozen_values():
    assert math.degrees(semi_flat_theta1(math.radians(89), UP)) == pytest.approx(
        10.580482495782952, abs=1e-6
    )
    assert math.degrees(semi_flat_theta1(math.radians(85), UP)) == pytest.approx(
        22.55912148294543, abs=1e-6
    )
    assert math.degrees(semi_flat_theta1(math.radians(80), UP)) == pytest.approx(
        29.990117792003048, abs=1e-6
    )


def test_semi_flat_branch_independent():
    for a in (70, 80, 89):
        tu = semi_flat_theta1(math.radians(a), UP)
        td = semi_flat_theta1(math.radians(a), DOWN)
        assert tu == pytest.approx(td, abs=1e-9)


def test_semi_flat_is_a_local_minimum():
    alpha = math.radians(85)

    def total(t):
        s = joint_state(alpha, t, UP)
        return abs(s.theta1) + abs(s.theta2) + abs(s.theta3) + abs(s.theta4)

    t0 = semi_flat_theta1(alpha, UP)
    assert total(t0) < total(t0 + 1e-3)
    assert total(t0) < total(t0 - 1e-3)


def test_sweep_table():
    table = sweep(math.radians(85), UP, math.radians(-30), math.radians(30), 7)
    arr = table.as_array()
    assert arr.shape == (7, 4)
    assert np.all(np.diff(arr[:, 0]) > 0)
    assert arr[0, 0] == pytest.approx(math.radians(-30))
    assert arr[-1, 0] == pytest.approx(math.radians(30))
    mid = arr[3]
    assert mid[0] == pytest.approx(0.0, abs=1e-12)
    assert mid[3] == pytest.approx(math.pi / 2, abs=1e-12)
    for row in table.rows:
        assert row.config is UP


def test_sweep_validation():
    alpha = math.radians(85)
    with pytest.raises(DomainError):
        sweep(alpha, UP, 0.0, 1.0, 1)
    with pytest.raises(DomainError):
        sweep(alpha, UP, 1.0, 1.0, 5)
    with pytest.raises(DomainError):
        sweep(alpha, UP, -4.0, 1.0, 5)
