"""Ad-ecosystem simulation: request schedules, traffic volume, scenario runs.

Per-ad traffic is aggregated from measured mean message sizes rather than
simulated packet by packet; all randomness flows from one seeded generator
with stable per-purpose substreams, so a (scenario, seed) pair fully
determines the run.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .catalog import (
    App,
    AppCatalog,
    CatalogError,
    InterestTaxonomy,
    default_taxonomy,
    load_catalog,
    similarity,
)
from .control import (
    ControlParams,
    QueueState,
    advance_queue,
    compute_B,
    control_step,
    penalty_bound,
    track_request,
    worst_case_penalty,
)
from .obfuscation import (
    DisruptionScenario,
    ObfuscationPlan,
    PrivacySpec,
    candidate_apps,
    plan_weightage,
    usability,
)
from .profiler import (
    ContextProfile,
    InterestProfile,
    ProfileDelta,
    ProfileState,
    apply_delta,
    assign_weightages,
    context_from_catalog,
    dominance,
    map_app_to_interests,
    profile_state,
)
from .usage import UsageTrace, flatten_plan, mean_usage, usage_variance

# Measured average message sizes in bytes, by message type.
MESSAGE_SIZES: dict[str, int] = {
    "200 Ok": 496,
    "POST": 350,
    "DNS Query Request": 68,
    "Ok/(PNG)": 1300,
    "GET /pagead/images": 578,
    "Ok/(GIF)": 1000,
    "DNS Query Response": 334,
    "Ok/(JPEG)": 1300,
    "Ok/(text/html)": 1200,
    "TCP reassembled PDU": 1434,
    "GET /geocode": 224,
    "no content": 396,
    "GET /simgad": 252,
    "Ok/(application/json)": 240,
    "GET /mads/gma": 685,
    "Ok/(text/javascript)": 800,
    "GET /imp": 244,
    "Ok/(text/css)": 824,
    "GET /generate_204": 244,
    "TCP Ack": 66,
    "GET /csi": 595,
    "TCP Syn": 74,
}

# Default per-ad control-message mix: the ad's own GET requests. With the
# 16 KB +/- 4 KB payload this places hourly 20/30 s apps in the 3.0-5.5 MB
# band and 45/60 s apps in 0.5-2.5 MB.
DEFAULT_MESSAGE_MIX: tuple[str, ...] = (
    "GET /pagead/images",
    "GET /geocode",
    "GET /simgad",
    "GET /mads/gma",
    "GET /imp",
    "GET /generate_204",
    "GET /csi",
)

# Per-class processing/battery constants (midpoints of the measured ranges).
CPU_PCT_BY_CLASS: dict[str, float] = {"games": 27.5, "default": 17.5}
BATTERY_PCT_PER_HOUR = 35.0

# Representative per-app storage footprints in MB: (installation, data, cache).
STORAGE_MB: dict[str, tuple[float, float, float]] = {
    "Youtube": (117.0, 2.57, 361.0),
    "Chrome": (86.88, 15.46, 1.53),
    "Foxit PDF": (96.42, 1.17, 32.91),
    "Google Play Store": (93.61, 7.48, 22.25),
    "Babel": (51.98, 14.79, 0.02),
    "Google Translate": (5.53, 392.0, 2.04),
    "Amazon Kindle": (53.30, 123.33, 4.98),
    "Subway Surf": (156.0, 85.98, 15.57),
    "File Manager": (8.37, 28.04, 17.83),
    "London City Guide": (60.98, 88.12, 4.56),
    "Skype": (62.95, 28.22, 13.41),
    "Viber": (159.0, 17.35, 0.12),
    "Adobe Acrobat": (20.91, 0.47, 0.22),
    "TripView Lite": (28.21, 5.92, 2.09),
}
DEFAULT_STORAGE_MB = (10.0, 5.0, 5.0)


class SimulationError(ValueError):
    """Raised on invalid scenarios or traffic-model inputs."""


@dataclass(frozen=True)
class TrafficModel:
    payload_mean: int = 16384
    payload_jitter: int = 4096
    objects_per_ad: tuple[int, int] = (8, 10)
    messages_per_ad: tuple[int, int] = (30, 35)
    message_sizes: dict[str, int] = field(default_factory=lambda: dict(MESSAGE_SIZES))
    message_mix: tuple[str, ...] = DEFAULT_MESSAGE_MIX

    def __post_init__(self):
        if self.payload_mean <= 0 or any(s <= 0 for s in self.message_sizes.values()):
            raise SimulationError("all sizes must be positive")
        if self.payload_jitter >= self.payload_mean:
            raise SimulationError("payload jitter must be below the mean")
        for name in self.message_mix:
            if name not in self.message_sizes:
                raise SimulationError(f"mix references unknown message type: {name}")


@dataclass(frozen=True)
class RefreshDistribution:
    values: tuple[int, ...] = (20, 30, 45, 60)
    probabilities: tuple[float, ...] = (0.36, 0.47, 0.15, 0.02)

    def __post_init__(self):
        if len(self.values) != len(self.probabilities):
            raise SimulationError("values and probabilities must align")
        if any(p < 0 for p in self.probabilities):
            raise SimulationError("probabilities must be non-negative")
        if abs(sum(self.probabilities) - 1.0) > 1e-9:
            raise SimulationError(
                f"probabilities must sum to 1, got {sum(self.probabilities)}"
            )


@dataclass(frozen=True)
class ResourceReport:
    communication_bytes: int
    cpu_pct: float
    battery_pct: float
    storage_mb: dict[str, tuple[float, float, float]]

    def to_json_dict(self) -> dict:
        return {
            "communication_bytes": self.communication_bytes,
            "cpu_pct": self.cpu_pct,
            "battery_pct": self.battery_pct,
            "storage_mb": {
                app: list(vals) for app, vals in sorted(self.storage_mb.items())
            },
        }


def stable_substream(seed: int, *tags) -> random.Random:
    """Seeded RNG substream derived by stable hashing; immune to PYTHONHASHSEED."""
    key = ":".join([str(seed)] + [str(t) for t in tags]).encode("utf-8")
    digest = hashlib.sha256(key).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def refresh_schedule(app: App, horizon_seconds: float) -> list[float]:
    """Deterministic ad-request timestamps 0, r, 2r, ... below the horizon."""
    if horizon_seconds <= 0:
        raise SimulationError("horizon must be positive")
    rate = app.ad_refresh_rate
    times = []
    t = 0.0
    while t < horizon_seconds:
        times.append(t)
        t += rate
    return times


def sample_refresh_rate(dist: RefreshDistribution, rng: random.Random) -> int:
    return rng.choices(dist.values, weights=dist.probabilities, k=1)[0]


def ad_traffic_volume(requests: int, model: TrafficModel, rng: random.Random) -> int:
    """Total bytes for a number of ad fetches: payload draw plus the per-ad
    control messages drawn from the configured mix."""
    if requests < 0:
        raise SimulationError("request count must be non-negative")
    sizes = [model.message_sizes[name] for name in model.message_mix]
    total = 0
    lo = model.payload_mean - model.payload_jitter
    hi = model.payload_mean + model.payload_jitter
    for _ in range(requests):
        total += rng.randint(lo, hi)
        n_msgs = rng.randint(*model.messages_per_ad)
        total += sum(rng.choices(sizes, k=n_msgs))
    return total


@dataclass(frozen=True)
class ActivityWindow:
    start_hour: float
    end_hour: float
    apps: tuple[str, ...]


@dataclass(frozen=True)
class SimScenario:
    name: str
    catalog: AppCatalog
    installed: tuple[str, ...]
    usage_shares: dict[str, float]
    activity: tuple[ActivityWindow, ...]
    privacy: PrivacySpec
    disruption: DisruptionScenario
    params: ControlParams
    horizon_seconds: int = 86400
    slot_seconds: int = 300
    seed: int = 1
    disruption_target: float | None = None  # overrides plan_weightage when set
    flatten_budget: int | None = None       # overrides the epsilon-derived budget
    eta_lp_max: float = 0.4
    candidates: int = 10
    taxonomy: InterestTaxonomy | None = None
    establishment_hours: float = 72.0

    def __post_init__(self):
        if self.horizon_seconds <= 0 or self.horizon_seconds % self.slot_seconds != 0:
            raise SimulationError("horizon must be a positive multiple of the slot length")
        if self.disruption_target is not None and not (0 < self.disruption_target < 1):
            raise SimulationError("disruption target must lie in (0, 1)")

    @property
    def n_slots(self) -> int:
        return self.horizon_seconds // self.slot_seconds

    def resolved_taxonomy(self) -> InterestTaxonomy:
        return self.taxonomy if self.taxonomy is not None else default_taxonomy(self.catalog)


def load_scenario(path) -> SimScenario:
    """Load a scenario YAML file; the catalog path resolves relative to it."""
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise SimulationError(f"scenario file {path} must be a mapping")
    try:
        catalog_ref = doc["catalog"]
        catalog_path = Path(catalog_ref)
        if not catalog_path.is_absolute():
            catalog_path = path.parent / catalog_path
        catalog = load_catalog(str(catalog_path))
        user = doc["user"]
        activity = tuple(
            ActivityWindow(
                start_hour=float(w["start_hour"]),
                end_hour=float(w["end_hour"]),
                apps=tuple(w["apps"]),
            )
            for w in user.get("activity", [])
        )
        privacy = doc["privacy"]
        spec = PrivacySpec(
            private_interests=frozenset(privacy.get("private_interests", [])),
            private_app_categories=frozenset(privacy.get("private_app_categories", [])),
        )
        ctrl = doc["control"]
        p_target = ctrl.get("p_target", "auto")
        params = ControlParams(
            V=float(ctrl.get("V", 5.0)),
            beta=float(ctrl.get("beta", 1.0)),
            epsilon=float(ctrl.get("epsilon", 0.5)),
            p_target=0.0 if p_target == "auto" else float(p_target),
            C_cost=float(ctrl.get("C_cost", 1.0)),
            c_min=float(ctrl.get("C_min", 0.01)),
            c_max=float(ctrl.get("C_max", 0.25)),
        )
        sim = doc.get("sim", {})
        scenario = SimScenario(
            name=str(doc.get("name", path.stem)),
            catalog=catalog,
            installed=tuple(user["installed"]),
            usage_shares={k: float(v) for k, v in user.get("usage_shares", {}).items()},
            activity=activity,
            privacy=spec,
            disruption=DisruptionScenario(str(privacy.get("scenario", "medium")).lower()),
            params=params,
            horizon_seconds=int(sim.get("horizon_s", 86400)),
            slot_seconds=int(sim.get("slot_s", 300)),
            seed=int(sim.get("seed", 1)),
            disruption_target=(
                float(privacy["disruption_target"])
                if privacy.get("disruption_target") is not None
                else None
            ),
            flatten_budget=(
                int(ctrl["flatten_budget"]) if ctrl.get("flatten_budget") is not None else None
            ),
            eta_lp_max=float(ctrl.get("eta_lp_max", 0.4)),
            candidates=int(privacy.get("k", 10)),
            establishment_hours=float(sim.get("establishment_hours", 72.0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (SimulationError, CatalogError)):
            raise
        raise SimulationError(f"malformed scenario {path}: {exc}") from exc
    if p_target == "auto":
        profile = assign_weightages(
            context_from_catalog(list(scenario.installed), scenario.usage_shares, catalog)
        )
        bounds = (profile.eta_min, profile.eta_max, scenario.eta_lp_max)
        params = replace(params, p_target=worst_case_penalty(params, bounds))
        scenario = replace(scenario, params=params)
    return scenario


def validate_scenario(scenario: SimScenario) -> list[str]:
    """Collect every invariant violation; empty list means valid."""
    problems = []
    if not scenario.installed:
        problems.append("user.installed: at least one app must be installed (n(K_a) >= 1)")
    for app_id in scenario.installed:
        if not scenario.catalog.has_app(app_id):
            problems.append(f"user.installed: app {app_id} not in catalog")
    shares = sum(scenario.usage_shares.values())
    if scenario.usage_shares and abs(shares - 1.0) > 1e-9:
        problems.append(f"user.usage_shares: shares sum to {shares}, expected 1")
    cat_ids = {c.id for c in scenario.catalog.categories}
    for cat in scenario.privacy.private_app_categories:
        if cat not in cat_ids:
            problems.append(f"privacy.private_app_categories: unknown category {cat}")
    taxonomy_ids = set(scenario.resolved_taxonomy().category_ids())
    for cat in scenario.privacy.private_interests:
        if cat not in taxonomy_ids:
            problems.append(f"privacy.private_interests: unknown interest category {cat}")
    for window in scenario.activity:
        if not (0 <= window.start_hour < window.end_hour <= 24):
            problems.append(f"user.activity: bad window {window.start_hour}-{window.end_hour}")
        for app_id in window.apps:
            if app_id not in scenario.installed:
                problems.append(f"user.activity: app {app_id} not installed")
    return problems


def user_activity_by_slot(scenario: SimScenario) -> list[tuple[str, ...]]:
    """Active installed apps per slot from the diurnal windows (24 h periodic)."""
    slots = []
    for i in range(scenario.n_slots):
        hour = (i * scenario.slot_seconds / 3600.0) % 24.0
        active: list[str] = []
        for window in scenario.activity:
            if window.start_hour <= hour < window.end_hour:
                active.extend(a for a in window.apps if a not in active)
        slots.append(tuple(active))
    return slots


def _ads_per_slot(apps: tuple[str, ...], catalog: AppCatalog, slot_seconds: int) -> int:
    return sum(
        len(refresh_schedule(catalog.app(app_id), slot_seconds)) for app_id in apps
    )


@dataclass
class RunReport:
    scenario_name: str
    seed: int
    ad_requests_per_slot: list[int]
    user_ad_requests: int
    obfs_ad_requests: int
    profile_before: InterestProfile
    profile_after: InterestProfile
    final_state: ProfileState
    plan: ObfuscationPlan
    obfs_categories: frozenset[str]
    served_ads: dict[str, int]
    control_log: list[dict]
    resources: ResourceReport
    traffic_bytes: int
    reduction_ratio: float
    usability: float
    total_utility: float
    cost_ratio: float
    disruption_pct: float
    relevance: float
    eliminated: bool
    flatten_variance_before: float
    flatten_variance_after: float

    @property
    def total_ad_requests(self) -> int:
        return self.user_ad_requests + self.obfs_ad_requests

    def to_json_dict(self) -> dict:
        return {
            "scenario": self.scenario_name,
            "seed": self.seed,
            "ad_requests": {
                "total": self.total_ad_requests,
                "user": self.user_ad_requests,
                "obfuscation": self.obfs_ad_requests,
                "per_slot": self.ad_requests_per_slot,
            },
            "profile_before": self.profile_before.to_json_dict(),
            "profile_after": self.profile_after.to_json_dict(state=self.final_state.value),
            "plan": {
                "scenario": self.plan.scenario.value,
                "apps": list(self.plan.apps),
                "target_weightage": self.plan.target_weightage,
            },
            "obfs_categories": sorted(self.obfs_categories),
            "served_ads": {k: self.served_ads[k] for k in sorted(self.served_ads)},
            "resources": self.resources.to_json_dict(),
            "traffic_bytes": self.traffic_bytes,
            "metrics": {
                "reduction_ratio": self.reduction_ratio,
                "usability": self.usability,
                "total_utility": self.total_utility,
                "cost_ratio": self.cost_ratio,
                "disruption_pct": self.disruption_pct,
                "relevance": self.relevance,
                "eliminated": self.eliminated,
            },
            "flatten_variance": {
                "before": self.flatten_variance_before,
                "after": self.flatten_variance_after,
            },
        }


def apportion(weights: dict[str, float], total: int) -> dict[str, int]:
    """Largest-remainder apportionment of an integer total across weights."""
    if total <= 0 or not weights:
        return {k: 0 for k in weights}
    wsum = sum(weights.values())
    exact = {k: total * w / wsum for k, w in weights.items()}
    out = {k: int(v) for k, v in exact.items()}
    leftover = total - sum(out.values())
    remainders = sorted(
        weights, key=lambda k: (-(exact[k] - out[k]), k)
    )
    for k in remainders[:leftover]:
        out[k] += 1
    return out


def resource_accounting(
    obfs_apps: list[str],
    obfs_slot_count: int,
    traffic_bytes: int,
    slot_seconds: int,
    catalog: AppCatalog,
    cpu_table: dict[str, float] | None = None,
) -> ResourceReport:
    """Aggregate communication, processing, battery, and storage overheads.

    Processing and battery use per-class constants scaled by obfuscation
    runtime; storage comes from the representative per-app table.
    """
    cpu_table = cpu_table if cpu_table is not None else CPU_PCT_BY_CLASS
    if "default" not in cpu_table:
        raise SimulationError("cpu table must define a default class")
    runtime_hours = obfs_slot_count * slot_seconds / 3600.0
    loads = []
    storage: dict[str, tuple[float, float, float]] = {}
    for app_id in obfs_apps:
        app = catalog.app(app_id)
        app_class = app.category if app.category in cpu_table else "default"
        loads.append(cpu_table[app_class])
        storage[app_id] = STORAGE_MB.get(app_id, DEFAULT_STORAGE_MB)
    # CPU: mean class load while obfuscation runs; battery: rate * runtime.
    cpu = sum(loads) / len(loads) if loads else 0.0
    battery = BATTERY_PCT_PER_HOUR * runtime_hours
    return ResourceReport(
        communication_bytes=traffic_bytes,
        cpu_pct=cpu,
        battery_pct=battery,
        storage_mb=storage,
    )


def run_simulation(
    scenario: SimScenario,
    seed: int | None = None,
    traffic_model: TrafficModel | None = None,
) -> RunReport:
    """Drive one deterministic slot-by-slot run of the full pipeline."""
    problems = validate_scenario(scenario)
    if problems:
        raise SimulationError("; ".join(problems))
    seed = scenario.seed if seed is None else seed
    model = traffic_model if traffic_model is not None else TrafficModel()
    catalog = scenario.catalog
    taxonomy = scenario.resolved_taxonomy()
    params = scenario.params

    context = context_from_catalog(list(scenario.installed), scenario.usage_shares, catalog)
    profile_0 = assign_weightages(context)
    bounds = (profile_0.eta_min, profile_0.eta_max, scenario.eta_lp_max)
    if params.p_target == 0.0:
        params = replace(params, p_target=worst_case_penalty(params, bounds))

    # Obfuscation plan: recommended apps plus the total weight to inject.
    ranked = candidate_apps(
        context, scenario.privacy, catalog, taxonomy, k=scenario.candidates
    )
    obfs_apps = [app.id for app, _ in ranked]
    obfs_categories: set[str] = set()
    for app, _ in ranked:
        obfs_categories |= map_app_to_interests(app, taxonomy)
    obfs_categories -= set(scenario.privacy.private_interests)
    obfs_categories -= set(profile_0.weights)
    if not obfs_categories:
        raise SimulationError("recommended apps generate no new interest categories")
    target_eta = plan_weightage(scenario.disruption, (profile_0.eta_min, profile_0.eta_max))
    plan = ObfuscationPlan(
        apps=tuple(obfs_apps),
        target_weightage=target_eta,
        scenario=scenario.disruption,
        generated_interests=frozenset(obfs_categories),
    )

    # User usage trace and the flattening schedule for obfuscation runs.
    activity = user_activity_by_slot(scenario)
    user_requests = [
        _ads_per_slot(apps, catalog, scenario.slot_seconds) for apps in activity
    ]
    trace = UsageTrace(bins=tuple(user_requests), slot_seconds=scenario.slot_seconds)
    trace_mean = mean_usage(trace)
    deficit = sum(max(0, int(trace_mean) - b) for b in trace.bins)
    if scenario.flatten_budget is not None:
        budget = scenario.flatten_budget
    else:
        budget = int(round(params.epsilon * deficit))
    fplan = flatten_plan(trace, obfs_apps, budget) if budget > 0 else flatten_plan(trace, obfs_apps, 0)
    obfs_units_by_slot = fplan.units_by_slot()
    obfs_slots = sorted(obfs_units_by_slot)
    flattened = fplan.apply(trace)

    # Per-slot loop: deltas, profiling state, control decision, traffic.
    delta_rng = stable_substream(seed, "deltas")
    profile = replace(profile_0, ceiling=10.0 * profile_0.total)
    queue = QueueState(B=compute_B(params.c_max, params.c_min))
    r_1 = 0.0
    tracked = False
    control_log: list[dict] = []
    state_history: list[tuple[int, float, bool]] = []
    sorted_obfs_categories = sorted(obfs_categories)
    traffic_bytes = 0
    ad_requests_per_slot: list[int] = []
    slot_hours = scenario.slot_seconds / 3600.0
    for slot in range(scenario.n_slots):
        active = activity[slot]
        # Bounded per-slot profile change attributed to active apps' categories.
        if active:
            magnitude = params.c_min + delta_rng.random() * (params.c_max - params.c_min)
            cats = sorted({catalog.app(a).category for a in active})
            mapped = sorted(
                {taxonomy.category_table.get(c, c) for c in cats}
            )
            delta = ProfileDelta(
                changes={c: magnitude / len(mapped) for c in mapped},
                source="apps-usage",
                slot=slot,
            )
        else:
            delta = ProfileDelta(changes={}, source="apps-usage", slot=slot)
        i_g_t = delta.total
        state_history.append((slot, i_g_t, bool(active)))
        p_state = profile_state(
            state_history,
            slot_hours=slot_hours,
            establishment_hours=scenario.establishment_hours,
        )
        decision = control_step(queue, p_state, i_g_t, bounds, params)
        profile = apply_delta(profile, delta, c_max=params.c_max)
        # Obfuscation activity scheduled into this slot.
        obfs_units = obfs_units_by_slot.get(slot, 0)
        requests = user_requests[slot] + obfs_units
        ad_requests_per_slot.append(requests)
        traffic_rng = stable_substream(seed, "traffic", slot)
        traffic_bytes += ad_traffic_volume(requests, model, traffic_rng)
        if not tracked and i_g_t >= params.c_min:
            r_1 = track_request(i_g_t, params.c_min)
            tracked = True
        queue = advance_queue(queue, i_g_t)
        bound = penalty_bound(params, queue.B, r_1, queue.t) if params.V > 0 else 0.0
        control_log.append(
            {
                "t": slot,
                "state_case": decision.case.value,
                "eta_lprime": decision.eta,
                "penalty": decision.penalty,
                "objective": decision.objective,
                "R": queue.R,
                "Q": queue.Q,
                "bound": bound,
            }
        )

    final_state = profile_state(
        state_history,
        slot_hours=slot_hours,
        establishment_hours=scenario.establishment_hours,
    )

    # Fold the obfuscation weight into the end-of-run profile. Sizing it
    # against the final organic total makes a configured disruption target
    # land exactly: w = T * total / (1 - T) gives w / (total + w) = T.
    profile_pre = profile
    if scenario.disruption_target is not None:
        t = scenario.disruption_target
        total_obfs_weight = t / (1.0 - t) * profile.total
    else:
        total_obfs_weight = target_eta * len(sorted_obfs_categories)
    per_cat = total_obfs_weight / len(sorted_obfs_categories)
    weights = dict(profile.weights)
    for c in sorted_obfs_categories:
        weights[c] = weights.get(c, 0.0) + per_cat
    profile = replace(profile, weights=weights)

    # Served-ads apportionment over the post-run profile (largest remainder).
    total_requests = sum(ad_requests_per_slot)
    served = apportion(profile.weights, total_requests)
    dominant_before = dominance(profile_0)[0][0]
    relevance = (
        served.get(dominant_before, 0) / total_requests if total_requests else 0.0
    )
    obfs_weight = sum(profile.weights.get(c, 0.0) for c in obfs_categories)
    disruption_pct = 100.0 * obfs_weight / profile.total

    # Utility / cost metrics.
    private_cats = sorted(scenario.privacy.private_interests) or [dominant_before]
    private_cat = private_cats[0]
    before_share = profile_pre.share(private_cat)
    after_share = profile.share(private_cat)
    eliminated = after_share <= 1e-9
    r_p = before_share / max(after_share, 1e-9) if before_share > 0 else 1.0
    installed_apps = [catalog.app(a) for a in scenario.installed]
    u_s = usability(catalog.app(obfs_apps[0]), installed_apps, catalog)
    u_t = r_p + u_s
    cost = len(obfs_apps) / len(scenario.installed)

    obfs_traffic_share = (
        traffic_bytes * (fplan.budget_used / total_requests) if total_requests else 0
    )
    resources = resource_accounting(
        obfs_apps,
        len(obfs_slots),
        int(obfs_traffic_share),
        scenario.slot_seconds,
        catalog,
    )

    return RunReport(
        scenario_name=scenario.name,
        seed=seed,
        ad_requests_per_slot=ad_requests_per_slot,
        user_ad_requests=sum(user_requests),
        obfs_ad_requests=fplan.budget_used,
        profile_before=profile_0,
        profile_after=profile,
        final_state=final_state,
        plan=plan,
        obfs_categories=frozenset(obfs_categories),
        served_ads=served,
        control_log=control_log,
        resources=resources,
        traffic_bytes=traffic_bytes,
        reduction_ratio=r_p,
        usability=u_s,
        total_utility=u_t,
        cost_ratio=cost,
        disruption_pct=disruption_pct,
        relevance=relevance,
        eliminated=eliminated,
        flatten_variance_before=usage_variance(trace, trace_mean),
        flatten_variance_after=usage_variance(flattened, trace_mean),
    )


def hourly_traffic_sample(
    n_apps: int = 270,
    seed: int = 1,
    dist: RefreshDistribution | None = None,
    model: TrafficModel | None = None,
    horizon_seconds: int = 3600,
) -> list[tuple[int, int]]:
    """Sample (refresh_rate, hourly_bytes) for a synthetic app population."""
    dist = dist if dist is not None else RefreshDistribution()
    model = model if model is not None else TrafficModel()
    rate_rng = stable_substream(seed, "refresh-rates")
    out = []
    for i in range(n_apps):
        rate = sample_refresh_rate(dist, rate_rng)
        n_ads = len(range(0, horizon_seconds, rate))
        rng = stable_substream(seed, "app-traffic", i)
        out.append((rate, ad_traffic_volume(n_ads, model, rng)))
    return out
