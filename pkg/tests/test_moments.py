"""Mechanical advantage and output moment transmission."""

import math

import pytest

from selflock import (
    ActuatorConditions,
    Configuration,
    DomainError,
    SingularityError,
    central_angle,
    input_moment,
    mechanical_advantage,
    moment_curve,
    output_moment,
    pouch_geometry,
)

UP = Configuration.UP
DOWN = Configuration.DOWN


def test_mechanical_advantage_frozen():
    assert mechanical_advantage(math.radians(80), math.radians(90), UP) == (
        pytest.approx(5.932418660810562, abs=1e-12)
    )


def test_mechanical_advantage_at_zero_is_2cos_alpha():
    for a in (61, 70, 80, 85, 89):
        alpha = math.radians(a)
        got = mechanical_advantage(alpha, 0.0, UP)
        assert abs(got - 2.0 * math.cos(alpha)) < 1e-10


def test_mechanical_advantage_branch_and_parity():
    alpha = math.radians(85)
    for t in (0.3, 1.0, 2.0):
        up = mechanical_advantage(alpha, t, UP)
        assert mechanical_advantage(alpha, t, DOWN) == pytest.approx(up, rel=1e-12)
        assert mechanical_advantage(alpha, -t, UP) == pytest.approx(up, rel=1e-12)


def test_mechanical_advantage_minimized_at_zero():
    alpha = math.radians(80)
    base = mechanical_advantage(alpha, 0.0, UP)
    for t in range(1, 91):
        assert mechanical_advantage(alpha, math.radians(t), UP) > base


def test_singularity_raises():
    # sin(theta2) vanishes at the fold-over point theta1 -> pi.
    with pytest.raises(SingularityError):
        mechanical_advantage(math.radians(89), math.pi - 1e-11, UP)
    assert issubclass(SingularityError, DomainError)


def test_output_moment_frozen_and_product():
    g = pouch_geometry(25.0, math.radians(89))
    c = ActuatorConditions(10000.0)
    alpha = math.radians(89)
    got = output_moment(g, c, alpha, 0.0, UP)
    assert got == pytest.approx(0.005577667603363424, abs=1e-15)
    assert got == mechanical_advantage(alpha, 0.0, UP) * input_moment(g, c, 0.0)


def test_moment_curve_rows():
    alpha = math.radians(85)
    g = pouch_geometry(25.0, alpha)
    c = ActuatorConditions(10000.0)
    rows = moment_curve(alpha, UP, g, c, math.radians(-90), math.radians(90), 19)
    assert len(rows) == 19
    assert rows[0].theta1 == pytest.approx(math.radians(-90))
    assert rows[-1].theta1 == pytest.approx(math.radians(90))
    for row in rows:
        assert row.M_output == row.MA * row.M_input
        assert row.S == central_angle(row.theta1)
        assert row.M_input == input_moment(g, c, row.theta1)


def test_moment_curve_validation():
    alpha = math.radians(85)
    g = pouch_geometry(25.0, alpha)
    c = ActuatorConditions(10000.0)
    with pytest.raises(DomainError):
        moment_curve(alpha, UP, g, c, 0.0, 1.0, 1)
    with pytest.raises(DomainError):
        moment_curve(alpha, UP, g, c, 1.0, 0.0, 5)
