"""
Unit tests for the 1-D maximization helpers.
"""

import math

import pytest

from pairsim.exceptions import InvalidSpecError
from pairsim.utils.search import golden_section_max, is_unimodal, prescan


def test_golden_section_finds_parabola_peak():
    x, fx = golden_section_max(lambda x: -(x - 2.0) ** 2 + 3.0, 1.0, 5.0, tol=1e-8)
    assert x == pytest.approx(2.0, abs=1e-6)
    assert fx == pytest.approx(3.0)


def test_golden_section_accepts_reversed_bracket():
    x, _ = golden_section_max(math.sin, 3.0, 0.0, tol=1e-9)
    assert x == pytest.approx(math.pi / 2, abs=1e-6)


def test_golden_section_follows_clamped_profile():
    """Flat zero to the right of the peak must not pull the search over."""
    x, fx = golden_section_max(lambda x: max(x * (1.0 - x), 0.0), 0.0, 10.0, tol=1e-9)
    assert x == pytest.approx(0.5, abs=1e-6)
    assert fx == pytest.approx(0.25)


def test_golden_section_narrow_bracket():
    x, fx = golden_section_max(lambda x: x, 1.0, 1.0 + 1e-9, tol=1e-6)
    assert x == pytest.approx(1.0 + 5e-10)
    assert fx == x


def test_golden_section_tolerance_must_be_positive():
    with pytest.raises(InvalidSpecError):
        golden_section_max(math.sin, 0.0, 1.0, tol=0.0)


@pytest.mark.parametrize(
    "ys, expected",
    [
        ([0, 1, 2, 1, 0], True),
        ([0, 0, 1, 0, 0], True),
        ([3, 2, 1], True),
        ([1, 2, 3], True),
        ([0, 2, 1, 2, 0], False),
        ([0, float("nan"), 1], False),
    ],
)
def test_is_unimodal(ys, expected):
    assert is_unimodal(ys) is expected


def test_prescan_grid_and_bracket():
    scan = prescan(lambda x: -abs(x - 0.3), 0.0, 1.0, points=11)
    assert len(scan.xs) == 11
    assert scan.xs[3] == pytest.approx(0.3)
    assert scan.best_index == 3
    assert not scan.at_boundary
    assert scan.bracket() == (pytest.approx(0.2), pytest.approx(0.4))
    assert scan.to_dict()["ys"][3] == pytest.approx(0.0)


def test_prescan_peak_at_boundary():
    scan = prescan(lambda x: x, 0.0, 1.0, points=5)
    assert scan.at_boundary
    assert scan.bracket() == (0.75, 1.0)


def test_prescan_needs_three_points():
    with pytest.raises(InvalidSpecError):
        prescan(lambda x: x, 0.0, 1.0, points=2)
