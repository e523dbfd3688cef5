"""Traffic model, scheduling, scenario loading, and the simulation runner."""

import random
from pathlib import Path

import pytest

from obfusim.adsim import (
    DEFAULT_MESSAGE_MIX,
    MESSAGE_SIZES,
    RefreshDistribution,
    SimulationError,
    TrafficModel,
    ad_traffic_volume,
    apportion,
    hourly_traffic_sample,
    load_scenario,
    refresh_schedule,
    resource_accounting,
    run_simulation,
    sample_refresh_rate,
    stable_substream,
    user_activity_by_slot,
    validate_scenario,
)
from obfusim.catalog import App, load_catalog

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


@pytest.fixture(scope="module")
def low_scenario():
    return load_scenario(SCENARIOS / "low.yaml")


def test_message_tables():
    assert MESSAGE_SIZES["GET /mads/gma"] == 685
    assert MESSAGE_SIZES["DNS Query Request"] == 68
    assert MESSAGE_SIZES["TCP Syn"] == 74
    assert all(name in MESSAGE_SIZES for name in DEFAULT_MESSAGE_MIX)


def test_refresh_schedule_counts():
    app = App(id="x", category="c", keywords=("k",), ad_refresh_rate=30)
    assert refresh_schedule(app, 300) == [0.0, 30, 60, 90, 120, 150, 180, 210, 240, 270]
    app45 = App(id="y", category="c", keywords=("k",), ad_refresh_rate=45)
    assert len(refresh_schedule(app45, 300)) == 7
    with pytest.raises(SimulationError):
        refresh_schedule(app, 0)


def test_refresh_distribution_validation():
    with pytest.raises(SimulationError):
        RefreshDistribution(values=(20, 30), probabilities=(0.5, 0.4))
    with pytest.raises(SimulationError):
        RefreshDistribution(values=(20,), probabilities=(0.5, 0.5))


def test_sample_refresh_rate_covers_support():
    dist = RefreshDistribution()
    rng = random.Random(3)
    drawn = {sample_refresh_rate(dist, rng) for _ in range(500)}
    assert drawn == {20, 30, 45, 60}


def test_ad_traffic_volume_range_and_monotonicity():
    model = TrafficModel()
    rng = random.Random(1)
    assert ad_traffic_volume(0, model, rng) == 0
    one = ad_traffic_volume(1, model, random.Random(1))
    # payload in [12288, 20480]; 30-35 control messages of 224..685 bytes
    assert 12288 + 30 * 224 <= one <= 20480 + 35 * 685
    few = ad_traffic_volume(10, model, random.Random(2))
    many = ad_traffic_volume(100, model, random.Random(2))
    assert many > few
    with pytest.raises(SimulationError):
        ad_traffic_volume(-1, model, rng)


def test_traffic_model_validation():
    with pytest.raises(SimulationError):
        TrafficModel(payload_mean=100, payload_jitter=200)
    with pytest.raises(SimulationError):
        TrafficModel(message_mix=("nope",))


def test_stable_substream_reproducible_and_distinct():
    a = stable_substream(7, "traffic", 3).random()
    b = stable_substream(7, "traffic", 3).random()
    c = stable_substream(7, "traffic", 4).random()
    assert a == b
    assert a != c


def test_apportion_oracle():
    got = apportion({"a": 2.0, "b": 1.0, "c": 1.0}, 10)
    assert got == {"a": 5, "b": 3, "c": 2} or got == {"a": 5, "b": 2, "c": 3}
    assert sum(got.values()) == 10
    # remainders: a=0, b=c=0.5; ties broken by key, so b gets the extra unit
    assert got["b"] == 3
    assert apportion({}, 10) == {}
    assert apportion({"a": 1.0}, 0) == {"a": 0}


def test_load_and_validate_scenario(low_scenario):
    assert low_scenario.name == "low"
    assert low_scenario.n_slots == 288
    assert validate_scenario(low_scenario) == []
    # auto p_target resolves to a positive worst-case penalty
    assert low_scenario.params.p_target > 0


def test_validate_catches_unknown_entries(low_scenario):
    from dataclasses import replace

    bad = replace(low_scenario, installed=low_scenario.installed + ("ghost",))
    assert any("ghost" in p for p in validate_scenario(bad))


def test_user_activity_by_slot(low_scenario):
    slots = user_activity_by_slot(low_scenario)
    assert len(slots) == 288
    # hour 9 falls in the morning window
    assert slots[9 * 12] == ("chatly", "puzzlequest")
    # hour 13 is idle
    assert slots[13 * 12] == ()
    # hour 19 falls in the evening window
    assert slots[19 * 12] == ("snapgram", "buzzline", "pokerpalace")


def test_resource_accounting_oracle():
    catalog = load_catalog(
        "categories: [{id: games, name: G}, {id: music, name: M}]\n"
        "apps:\n"
        "  - {id: g1, category: games, keywords: [k], refresh_rate_s: 30}\n"
        "  - {id: m1, category: music, keywords: [k], refresh_rate_s: 30}\n"
    )
    report = resource_accounting(
        ["g1", "m1"], obfs_slot_count=12, traffic_bytes=1000,
        slot_seconds=300, catalog=catalog,
    )
    assert report.communication_bytes == 1000
    assert report.cpu_pct == pytest.approx((27.5 + 17.5) / 2)
    assert report.battery_pct == pytest.approx(35.0)  # 1 hour of runtime
    assert report.storage_mb == {"g1": (10.0, 5.0, 5.0), "m1": (10.0, 5.0, 5.0)}


def test_run_simulation_report_consistency(low_scenario):
    report = run_simulation(low_scenario)
    assert report.total_ad_requests == sum(report.ad_requests_per_slot)
    assert report.total_ad_requests == report.user_ad_requests + report.obfs_ad_requests
    assert len(report.control_log) == low_scenario.n_slots
    assert sum(report.served_ads.values()) == report.total_ad_requests
    assert 0 < report.disruption_pct < 100
    assert report.flatten_variance_after <= report.flatten_variance_before
    assert report.traffic_bytes > 0
    # every control row carries the full decision schema
    row = report.control_log[0]
    assert set(row) == {"t", "state_case", "eta_lprime", "penalty", "objective", "R", "Q", "bound"}
    # injected categories never touch the private interest
    assert "gambling" not in report.obfs_categories


def test_hourly_traffic_sample_shape():
    sample = hourly_traffic_sample(n_apps=30, seed=2)
    assert len(sample) == 30
    for rate, volume in sample:
        assert rate in (20, 30, 45, 60)
        assert volume > 0
