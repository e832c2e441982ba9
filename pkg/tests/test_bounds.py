"""
Feature: Closed-form bounds for the carpets
  As a researcher
  I want the analytic corner and center bounds and the threshold exponents
  So that computed conductances can be checked against them

Scenario: Known values
  Given d, p and m
  When a bound is evaluated
  Then it equals the closed form

Scenario: Unsupported input
  Given d outside {2, 3} or m < 1
  When a bound is evaluated
  Then a domain error is raised
"""

import math

import pytest

from lattice.builtins import builtin_spec
from lab.bounds import (
    boundary_strip_count,
    center_upper_bound,
    conformal_dimension_bounds,
    corner_lower_bound,
    failure_threshold,
    is_carpet,
)
from models.errors import InvalidProblemError, UnsupportedDimensionError


@pytest.mark.parametrize("d, p, m, expected", [
    (2, 2.0, 1, 1 / 3),
    (3, 2.0, 1, 8 / 3),
    (2, 1.2, 1, 2 * 6 ** -0.2),
    (2, 2.0, 2, 4 / 26),
])
def test_corner_lower_bound(d, p, m, expected):
    assert corner_lower_bound(d, p, m) == pytest.approx(expected, rel=1e-12)


def test_corner_lower_bound_at_threshold():
    # Given p at the two-dimensional failure threshold
    p = math.log(10) / math.log(5)

    # When evaluated for growing m
    values = [corner_lower_bound(2, p, m) for m in range(1, 6)]

    # Then it follows (1 + 5^-m)^(-log 2 / log 5), increases and stays below 1
    for m, value in enumerate(values, start=1):
        assert value == pytest.approx((1 + 5.0 ** -m) ** (-math.log(2) / math.log(5)), rel=1e-12)
    assert values[0] == pytest.approx(0.9245, abs=1e-4)
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(0.92 < v < 1 for v in values)


@pytest.mark.parametrize("d, m, expected", [(2, 1, 4.0), (2, 3, 4.0), (3, 1, 308.0), (3, 2, 1988.0)])
def test_center_upper_bound(d, m, expected):
    assert center_upper_bound(d, m) == expected


def test_failure_threshold():
    assert failure_threshold(2) == pytest.approx(1.43068, abs=1e-5)
    assert failure_threshold(3) == pytest.approx(1.72271, abs=1e-5)


def test_conformal_dimension_bounds():
    low, high = conformal_dimension_bounds(2)
    assert low == pytest.approx(failure_threshold(2))
    assert high == pytest.approx(1.891668, abs=1e-6)
    low, high = conformal_dimension_bounds(3)
    assert low == pytest.approx(math.log(80) / math.log(5))
    assert high == pytest.approx(2.969449, abs=1e-6)


@pytest.mark.parametrize("d, m, expected", [(2, 0, 1), (2, 1, 2), (2, 3, 8), (2, 4, 16), (3, 1, 16), (3, 2, 256)])
def test_boundary_strip_count(d, m, expected):
    assert boundary_strip_count(d, m) == expected


def test_unsupported_input():
    with pytest.raises(UnsupportedDimensionError):
        corner_lower_bound(4, 2.0, 1)
    with pytest.raises(UnsupportedDimensionError):
        failure_threshold(1)
    with pytest.raises(InvalidProblemError):
        center_upper_bound(2, 0)
    with pytest.raises(InvalidProblemError):
        corner_lower_bound(2, 1.0, 1)


def test_is_carpet():
    assert is_carpet(builtin_spec("F2"))
    assert is_carpet(builtin_spec("F3"))
    assert not is_carpet(builtin_spec("tildeF2"))
    assert not is_carpet(builtin_spec("G2"))
