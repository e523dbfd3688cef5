"""Obfuscation-app recommendation, weightage planning, usability."""

import json

import pytest

from obfusim.catalog import default_taxonomy, load_catalog, similarity
from obfusim.obfuscation import (
    DisruptionScenario,
    ObfuscationError,
    ObfuscationPlan,
    PrivacySpec,
    candidate_apps,
    plan_weightage,
    usability,
)
from obfusim.profiler import context_from_catalog

CATALOG_YAML = """
categories:
  - {id: social, name: Social}
  - {id: gambling, name: Gambling}
  - {id: music, name: Music}
  - {id: travel, name: Travel}
apps:
  - {id: chat, category: social, keywords: [chat, friends, photo], refresh_rate_s: 30}
  - {id: feed, category: social, keywords: [photo, friends, stories], refresh_rate_s: 20}
  - {id: poker, category: gambling, keywords: [poker, casino], refresh_rate_s: 20}
  - {id: tunes, category: music, keywords: [music, audio, photo], refresh_rate_s: 30}
  - {id: pods, category: music, keywords: [podcasts, audio], refresh_rate_s: 45}
  - {id: trips, category: travel, keywords: [flights, hotels], refresh_rate_s: 60}
"""


@pytest.fixture
def catalog():
    return load_catalog(CATALOG_YAML)


@pytest.fixture
def context(catalog):
    return context_from_catalog(["chat"], {"chat": 1.0}, catalog)


@pytest.fixture
def spec():
    return PrivacySpec(
        private_interests=frozenset({"gambling"}),
        private_app_categories=frozenset({"gambling"}),
    )


def test_candidates_exclude_installed_and_private(catalog, context, spec):
    tax = default_taxonomy(catalog)
    ranked = candidate_apps(context, spec, catalog, tax)
    ids = [app.id for app, _ in ranked]
    assert "chat" not in ids
    assert "poker" not in ids
    assert set(ids) <= {"feed", "tunes", "pods", "trips"}


def test_candidates_ranked_by_similarity(catalog, context, spec):
    tax = default_taxonomy(catalog)
    ranked = candidate_apps(context, spec, catalog, tax)
    chat = catalog.app("chat")
    scores = [similarity(app, chat, catalog) for app, _ in ranked]
    assert scores == sorted(scores, reverse=True)
    for app, score in ranked:
        assert score == pytest.approx(similarity(app, chat, catalog))
    # k truncates
    assert len(candidate_apps(context, spec, catalog, tax, k=2)) == 2


def test_candidates_error_when_nothing_eligible(catalog, spec):
    ctx = context_from_catalog(
        ["chat", "feed", "tunes", "pods", "trips"], {"chat": 1.0}, catalog
    )
    with pytest.raises(ObfuscationError, match="no eligible apps"):
        candidate_apps(ctx, spec, catalog, default_taxonomy(catalog))


def test_plan_weightage_cases():
    bounds = (0.3, 0.9)
    assert plan_weightage(DisruptionScenario.LOW, bounds) == pytest.approx(0.15)
    assert plan_weightage(DisruptionScenario.MEDIUM, bounds) == pytest.approx(0.6)
    assert plan_weightage(DisruptionScenario.HIGH, bounds) == pytest.approx(1.35)
    assert (
        plan_weightage(DisruptionScenario.LOW, bounds)
        < plan_weightage(DisruptionScenario.MEDIUM, bounds)
        < plan_weightage(DisruptionScenario.HIGH, bounds)
    )
    with pytest.raises(ObfuscationError):
        plan_weightage(DisruptionScenario.LOW, (0.9, 0.3))


def test_usability_range_and_oracle(catalog):
    installed = [catalog.app("chat")]
    outsiders = [a for a in catalog.apps if a.id != "chat"]
    best = max(similarity(o, catalog.app("chat"), catalog) for o in outsiders)
    for candidate in outsiders:
        u = usability(candidate, installed, catalog)
        expected = min(
            1.0, similarity(candidate, catalog.app("chat"), catalog) / best
        )
        assert u == pytest.approx(expected, abs=1e-12)
        assert 0.0 <= u <= 1.0
    # the best outsider scores exactly 1
    top = max(outsiders, key=lambda a: similarity(a, catalog.app("chat"), catalog))
    assert usability(top, installed, catalog) == pytest.approx(1.0)


def test_usability_rejects_installed(catalog):
    with pytest.raises(ObfuscationError):
        usability(catalog.app("chat"), [catalog.app("chat")], catalog)
    with pytest.raises(ObfuscationError):
        usability(catalog.app("feed"), [], catalog)


def test_privacy_spec_requires_categories():
    with pytest.raises(ObfuscationError):
        PrivacySpec(private_interests=frozenset(), private_app_categories=frozenset())


def test_plan_json_schema():
    plan = ObfuscationPlan(
        apps=("a", "b"),
        target_weightage=0.6,
        scenario=DisruptionScenario.MEDIUM,
    )
    doc = json.loads(plan.to_json())
    assert doc == {"scenario": "medium", "apps": ["a", "b"], "target_weightage": 0.6}
