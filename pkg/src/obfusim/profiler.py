"""Interest-profile construction and evolution.

Builds interest profiles from the installed-app context, folds in browsing
history and ad-interaction components, applies bounded per-slot deltas, and
tracks the establishment / evolution / stable lifecycle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .catalog import App, AppCatalog, InterestTaxonomy

# Exact-arithmetic denominator bound when recovering rational usage shares
# from floats (0.7 -> 7/10).
_SHARE_DENOMINATOR_LIMIT = 10**6

DEFAULT_ESTABLISHMENT_HOURS = 72.0
DEFAULT_ACTIVITY_SLOTS = 50
DEFAULT_EVOLUTION_HOURS = 24.0


class ProfilerError(ValueError):
    """Raised on invalid profiles, deltas, or histories."""


@dataclass(frozen=True)
class ContextProfile:
    """Installed apps with their categories and per-app usage shares.

    ``usage_shares`` covers used apps only and must sum to 1; installed apps
    absent from it are treated as installed-but-unused.
    """

    apps: tuple[tuple[str, str], ...]  # (app_id, category)
    usage_shares: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.apps:
            raise ProfilerError("context profile requires at least one installed app")
        ids = [a for a, _ in self.apps]
        if len(set(ids)) != len(ids):
            raise ProfilerError("duplicate app in context profile")
        for app_id, category in self.apps:
            if not category:
                raise ProfilerError(f"app {app_id} has undefined category")
        for app_id in self.usage_shares:
            if app_id not in ids:
                raise ProfilerError(f"usage share for app not installed: {app_id}")
        if self.usage_shares:
            total = sum(self.usage_shares.values())
            if abs(total - 1.0) > 1e-9:
                raise ProfilerError(f"usage shares of used apps must sum to 1, got {total}")

    @property
    def n_apps(self) -> int:
        return len(self.apps)

    def categories(self) -> list[str]:
        return sorted({c for _, c in self.apps})


def context_from_catalog(
    installed: list[str], usage_shares: dict[str, float], catalog: AppCatalog
) -> ContextProfile:
    """Build a context profile for installed app ids, validated against a catalog."""
    if len(installed) > len(catalog):
        raise ProfilerError("more installed apps than the catalog contains")
    apps = tuple((app_id, catalog.app(app_id).category) for app_id in installed)
    return ContextProfile(apps=apps, usage_shares=dict(usage_shares))


@dataclass(frozen=True)
class InterestProfile:
    """Per-category weightages plus history and ad-interaction totals.

    Weights are raw (may exceed 1 and need not sum to 1); ``normalized`` gives
    the derived share view.
    """

    weights: dict[str, float]
    history_weight: float = 0.0
    ad_weight: float = 0.0
    slot: int = 0
    ceiling: float | None = None  # convergence ceiling on total weight

    def __post_init__(self):
        for cat, w in self.weights.items():
            if w <= 0:
                raise ProfilerError(f"non-positive weight for category {cat}")

    @property
    def total(self) -> float:
        return sum(self.weights.values())

    @property
    def eta_min(self) -> float:
        return min(self.weights.values())

    @property
    def eta_max(self) -> float:
        return max(self.weights.values())

    def normalized(self) -> dict[str, float]:
        total = self.total
        return {cat: w / total for cat, w in self.weights.items()}

    def share(self, category: str) -> float:
        return self.weights.get(category, 0.0) / self.total

    def to_json_dict(self, state: str | None = None) -> dict:
        out = {
            "slot": self.slot,
            "weights": {c: self.weights[c] for c in sorted(self.weights)},
            "history_weight": self.history_weight,
            "ad_weight": self.ad_weight,
        }
        if state is not None:
            out["state"] = state
        return out


@dataclass(frozen=True)
class ProfileDelta:
    """Per-category weight changes for one slot."""

    changes: dict[str, float]
    source: str = "apps-usage"  # apps-usage | history | ad-interaction
    slot: int = 0

    def __post_init__(self):
        if self.source not in ("apps-usage", "history", "ad-interaction"):
            raise ProfilerError(f"unknown delta source: {self.source}")
        for cat, c in self.changes.items():
            if c <= 0:
                raise ProfilerError(f"delta entries must be positive (category {cat})")

    @property
    def total(self) -> float:
        return sum(self.changes.values())


class ProfileState(enum.Enum):
    EMPTY = "empty"
    ESTABLISHMENT = "establishment"
    EVOLUTION = "evolution"
    STABLE = "stable"


class UpdateKind(enum.Enum):
    APPS_UNINSTALLED = "apps_uninstalled"
    NEW_APPS_INSTALLED = "new_apps_installed"
    UNUSED_BECAME_USED = "unused_became_used"
    USED_BECAME_UNUSED = "used_became_unused"
    NO_CHANGE = "no_change"


def map_context_to_interests(
    context: ContextProfile,
    taxonomy: InterestTaxonomy,
    catalog: AppCatalog,
    theta_map: int = 1,
) -> set[str]:
    """Deterministic set of interest category ids drawn by the installed apps.

    An app contributes a category when it shares at least ``theta_map`` keyword
    terms with one of the category's interests, or when the taxonomy's static
    category table maps the app's category there. Apps may contribute nothing.
    """
    result: set[str] = set()
    for app_id, app_category in context.apps:
        app = catalog.app(app_id)
        result |= map_app_to_interests(app, taxonomy, theta_map)
        mapped = taxonomy.category_table.get(app_category)
        if mapped is not None:
            result.add(mapped)
    return result


def map_app_to_interests(
    app: App, taxonomy: InterestTaxonomy, theta_map: int = 1
) -> set[str]:
    """Interest categories a single app draws via keyword overlap or the table."""
    support = app.keyword_support()
    result: set[str] = set()
    for cat in taxonomy.categories:
        if any(len(support & g.keywords) >= theta_map for g in cat.interests):
            result.add(cat.id)
    mapped = taxonomy.category_table.get(app.category)
    if mapped is not None:
        result.add(mapped)
    return result


def assign_weightages(context: ContextProfile) -> InterestProfile:
    """Initial per-category weightages from installed-app counts and usage time.

    eta(c) = (installed apps in c) / n + (usage-time share of c). Unused apps
    contribute only the 1/n count floor. Computed in exact rational arithmetic
    so decimal usage shares round-trip exactly.
    """
    n = context.n_apps
    counts: dict[str, int] = {}
    usage: dict[str, Fraction] = {}
    for app_id, category in context.apps:
        counts[category] = counts.get(category, 0) + 1
        share = context.usage_shares.get(app_id)
        if share is not None:
            usage[category] = usage.get(category, Fraction(0)) + Fraction(
                share
            ).limit_denominator(_SHARE_DENOMINATOR_LIMIT)
    weights = {
        cat: float(Fraction(counts[cat], n) + usage.get(cat, Fraction(0)))
        for cat in counts
    }
    return InterestProfile(weights=weights)


def incorporate_component(
    profile: InterestProfile, source: str, category: str, weight: float
) -> InterestProfile:
    """Fold a history or ad-interaction event into the unified weight map."""
    if source not in ("history", "ad-interaction"):
        raise ProfilerError(f"component source must be history or ad-interaction, got {source}")
    lower = min(profile.eta_min, 0.0)
    if not (lower < weight <= profile.eta_max):
        raise ProfilerError(
            f"component weight {weight} outside ({lower}, {profile.eta_max}]"
        )
    weights = dict(profile.weights)
    weights[category] = weights.get(category, 0.0) + weight
    if source == "history":
        return replace(profile, weights=weights, history_weight=profile.history_weight + weight)
    return replace(profile, weights=weights, ad_weight=profile.ad_weight + weight)


def apply_delta(
    profile: InterestProfile, delta: ProfileDelta, c_max: float | None = None
) -> InterestProfile:
    """Advance the profile one slot by a bounded delta.

    Entries must respect the per-slot bound ``c_max`` when given. The total is
    capped at the profile's convergence ceiling by scaling the incoming delta.
    """
    if c_max is not None:
        for cat, c in delta.changes.items():
            if c > c_max + 1e-12:
                raise ProfilerError(f"delta for {cat} exceeds per-slot bound {c_max}")
    changes = delta.changes
    if profile.ceiling is not None and changes:
        room = profile.ceiling - profile.total
        if room <= 0:
            changes = {}
        elif delta.total > room:
            scale = room / delta.total
            changes = {cat: c * scale for cat, c in changes.items()}
    weights = dict(profile.weights)
    for cat, c in changes.items():
        weights[cat] = weights.get(cat, 0.0) + c
    return replace(profile, weights=weights, slot=profile.slot + 1)


def classify_update(
    old: tuple[float, float],
    new: tuple[float, float],
    installed_changed: bool = True,
) -> UpdateKind:
    """Classify a threshold change per the min/max inequality table.

    Both min/max rising or both falling is ambiguous between app-set changes
    and activity changes; ``installed_changed`` disambiguates (default: treat
    as an install/uninstall event).
    """
    old_min, old_max = old
    new_min, new_max = new
    if old_min <= 0 or old_max <= 0 or new_min <= 0 or new_max <= 0:
        raise ProfilerError("thresholds must be positive")
    if new_min == old_min and new_max == old_max:
        return UpdateKind.NO_CHANGE
    if new_max > old_max and new_min > old_min:
        return UpdateKind.APPS_UNINSTALLED if installed_changed else UpdateKind.USED_BECAME_UNUSED
    if new_max < old_max and new_min < old_min:
        return UpdateKind.NEW_APPS_INSTALLED if installed_changed else UpdateKind.UNUSED_BECAME_USED
    return UpdateKind.NO_CHANGE


def merged_thresholds(
    old: tuple[float, float], new: tuple[float, float]
) -> tuple[float, float]:
    """Equivalent constraint after an update: min of mins, max of maxes."""
    return (min(old[0], new[0]), max(old[1], new[1]))


def profile_state(
    history: list[tuple[int, float, bool]],
    slot_hours: float = 1.0,
    establishment_hours: float = DEFAULT_ESTABLISHMENT_HOURS,
    activity_slots: int = DEFAULT_ACTIVITY_SLOTS,
    evolution_hours: float = DEFAULT_EVOLUTION_HOURS,
) -> ProfileState:
    """Lifecycle state from a chronological (slot, delta_total, active) history.

    Empty with no activity ever; Establishment until cumulative active time
    reaches ``establishment_hours`` and ``activity_slots`` active slots; Stable
    after a full evolution threshold with zero deltas; Evolution otherwise.
    """
    last_slot = None
    active_slots = 0
    last_delta_slot = None
    final_slot = None
    for slot, delta_total, active in history:
        if last_slot is not None and slot < last_slot:
            raise ProfilerError("history must be chronologically ordered")
        last_slot = slot
        final_slot = slot
        if active:
            active_slots += 1
        if delta_total != 0.0:
            last_delta_slot = slot
    if active_slots == 0 and last_delta_slot is None:
        return ProfileState.EMPTY
    active_hours = active_slots * slot_hours
    established = active_hours >= establishment_hours and active_slots >= activity_slots
    if not established:
        return ProfileState.ESTABLISHMENT
    quiet_slots = (final_slot - last_delta_slot) if last_delta_slot is not None else (final_slot + 1)
    if quiet_slots * slot_hours >= evolution_hours:
        return ProfileState.STABLE
    return ProfileState.EVOLUTION


def dominance(profile: InterestProfile) -> list[tuple[str, float]]:
    """Categories sorted by weight descending; ties broken by id ascending."""
    if not profile.weights:
        raise ProfilerError("dominance of an empty profile")
    return sorted(profile.weights.items(), key=lambda kv: (-kv[1], kv[0]))
