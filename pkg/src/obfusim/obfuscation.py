"""Obfuscation-app recommendation, scenario weightage planning, usability."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .catalog import App, AppCatalog, InterestTaxonomy, similarity
from .profiler import ContextProfile, map_app_to_interests

USABILITY_FLOOR = 1e-9
DEFAULT_CANDIDATES = 10


class ObfuscationError(ValueError):
    """Raised when no eligible apps exist or inputs are invalid."""


class DisruptionScenario(enum.Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


@dataclass(frozen=True)
class PrivacySpec:
    private_interests: frozenset[str]
    private_app_categories: frozenset[str]

    def __post_init__(self):
        if not self.private_interests and not self.private_app_categories:
            raise ObfuscationError("privacy spec must name at least one private category")


@dataclass(frozen=True)
class ObfuscationPlan:
    apps: tuple[str, ...]  # ranked recommended app ids
    target_weightage: float
    scenario: DisruptionScenario
    generated_interests: frozenset[str] = field(default_factory=frozenset)

    def to_json(self) -> str:
        return json.dumps(
            {
                "scenario": self.scenario.value,
                "apps": list(self.apps),
                "target_weightage": self.target_weightage,
            },
            sort_keys=True,
        )


def candidate_apps(
    context: ContextProfile,
    spec: PrivacySpec,
    catalog: AppCatalog,
    taxonomy: InterestTaxonomy,
    k: int = DEFAULT_CANDIDATES,
    metric: str = "cosine",
) -> list[tuple[App, float]]:
    """Top-k non-installed apps outside the private categories, ranked by
    maximum similarity to any installed app (ties: app id ascending).

    Apps whose mapped interests touch a private interest category are filtered
    out rather than assumed away.
    """
    installed_ids = {app_id for app_id, _ in context.apps}
    installed_apps = [catalog.app(app_id) for app_id in installed_ids]
    scored = []
    for app in catalog.apps:
        if app.id in installed_ids:
            continue
        if app.category in spec.private_app_categories:
            continue
        mapped = map_app_to_interests(app, taxonomy)
        if mapped & spec.private_interests:
            continue
        score = max(similarity(app, inst, catalog, metric) for inst in installed_apps)
        scored.append((app, score))
    if not scored:
        raise ObfuscationError("no eligible apps")
    scored.sort(key=lambda pair: (-pair[1], pair[0].id))
    return scored[:k]


def plan_weightage(
    scenario: DisruptionScenario, bounds: tuple[float, float]
) -> float:
    """Representative target weightage for a disruption scenario.

    Low: eta_min/2 (below the minimum threshold); Medium: the midpoint of
    [eta_min, eta_max]; High: 1.5 * eta_max (above the maximum threshold).
    """
    eta_min, eta_max = bounds
    if not (0 < eta_min <= eta_max):
        raise ObfuscationError(f"invalid bounds ({eta_min}, {eta_max})")
    if scenario is DisruptionScenario.LOW:
        return eta_min / 2.0
    if scenario is DisruptionScenario.MEDIUM:
        return (eta_min + eta_max) / 2.0
    return eta_max * 1.5


def usability(
    app: App,
    installed: list[App],
    catalog: AppCatalog,
    metric: str = "cosine",
) -> float:
    """Ratio measure of how plausibly a user would organically use ``app``.

    For each installed app, compare the candidate's similarity to it against
    the best similarity achieved by any non-installed app; take the minimum
    ratio. A candidate that is itself the best outsider everywhere scores 1.
    """
    if not installed:
        raise ObfuscationError("usability requires a non-empty installed set")
    installed_ids = {a.id for a in installed}
    if app.id in installed_ids:
        raise ObfuscationError("candidate app is already installed")
    outsiders = [a for a in catalog.apps if a.id not in installed_ids]
    ratios = []
    for inst in installed:
        numer = similarity(app, inst, catalog, metric)
        denom = max(similarity(out, inst, catalog, metric) for out in outsiders)
        ratios.append(numer / max(denom, USABILITY_FLOOR))
    return min(1.0, min(ratios))
