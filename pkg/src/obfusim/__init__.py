"""Simulator for interest-profile obfuscation against in-app ad targeting."""

from .adsim import (
    RefreshDistribution,
    RunReport,
    SimScenario,
    SimulationError,
    TrafficModel,
    ad_traffic_volume,
    load_scenario,
    run_simulation,
)
from .catalog import App, AppCatalog, CatalogError, load_catalog, similarity
from .control import ControlParams, ControlError, control_step, penalty_bound
from .metrics import reduction_ratio, total_utility, tradeoff_curve
from .obfuscation import DisruptionScenario, ObfuscationPlan, PrivacySpec, candidate_apps
from .profiler import (
    ContextProfile,
    InterestProfile,
    ProfileState,
    ProfilerError,
    assign_weightages,
)
from .usage import FlattenPlan, UsageTrace, flatten_plan

__version__ = "0.1.0"

__all__ = [
    "App",
    "AppCatalog",
    "CatalogError",
    "ContextProfile",
    "ControlError",
    "ControlParams",
    "DisruptionScenario",
    "FlattenPlan",
    "InterestProfile",
    "ObfuscationPlan",
    "PrivacySpec",
    "ProfileState",
    "ProfilerError",
    "RefreshDistribution",
    "RunReport",
    "SimScenario",
    "SimulationError",
    "TrafficModel",
    "UsageTrace",
    "ad_traffic_volume",
    "assign_weightages",
    "candidate_apps",
    "control_step",
    "flatten_plan",
    "load_catalog",
    "load_scenario",
    "penalty_bound",
    "reduction_ratio",
    "run_simulation",
    "similarity",
    "total_utility",
    "tradeoff_curve",
]
