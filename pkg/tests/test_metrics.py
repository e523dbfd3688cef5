"""Evaluation-metric formulas and the trade-off curve serialization."""

import random

import pytest

from obfusim.metrics import (
    MetricsError,
    TradeoffPoint,
    cost_ratio,
    reduction_ratio,
    total_utility,
    tradeoff_curve,
    tradeoff_to_csv,
)
from obfusim.profiler import InterestProfile


def test_reduction_ratio_oracle():
    before = InterestProfile(weights={"a": 0.3, "b": 0.7})
    after = InterestProfile(weights={"a": 0.3, "b": 0.7, "c": 1.0})
    # shares: a goes 0.30 -> 0.15, so the ratio is exactly 2
    result = reduction_ratio(before, after, "a")
    assert result.ratio == pytest.approx((0.3 / 1.0) / (0.3 / 2.0))
    assert not result.eliminated


def test_reduction_ratio_elimination_flag():
    before = InterestProfile(weights={"a": 0.5, "b": 0.5})
    after = InterestProfile(weights={"b": 1.0})
    result = reduction_ratio(before, after, "a")
    assert result.eliminated
    assert result.ratio >= 1e8  # floored denominator
    with pytest.raises(MetricsError):
        reduction_ratio(after, before, "a")


def test_total_utility_and_cost():
    assert total_utility(2.0, 0.5) == 2.5
    assert cost_ratio(10, 5) == 2.0
    with pytest.raises(MetricsError):
        total_utility(-1.0, 0.0)
    with pytest.raises(MetricsError):
        cost_ratio(1, 0)


def _point(name, disruption):
    return TradeoffPoint(
        scenario=name,
        disruption_pct=disruption,
        relevance=0.5,
        U_T=1.0,
        C=2.0,
        R_c_bytes=100,
        R_p_pct=17.5,
        R_b_pct=35.0,
    )


def test_tradeoff_curve_permutation_invariant():
    points = [_point("a", 30.0), _point("b", 10.0), _point("c", 80.0)]
    expected = tradeoff_curve(points)
    for _ in range(5):
        shuffled = points[:]
        random.Random(_).shuffle(shuffled)
        assert tradeoff_curve(shuffled) == expected
    assert [p.scenario for p in expected] == ["b", "a", "c"]


def test_tradeoff_csv_schema():
    text = tradeoff_to_csv([_point("x", 10.0)])
    lines = text.splitlines()
    assert lines[0] == "scenario,disruption_pct,relevance,U_T,C,R_c_bytes,R_p_pct,R_b_pct"
    assert lines[1].startswith("x,10.000000,0.500000,")
