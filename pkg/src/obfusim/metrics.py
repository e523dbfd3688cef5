"""Evaluation metrics: profiling reduction, utility, cost, trade-off curves."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .profiler import InterestProfile

_SHARE_FLOOR = 1e-9

TRADEOFF_COLUMNS = (
    "scenario",
    "disruption_pct",
    "relevance",
    "U_T",
    "C",
    "R_c_bytes",
    "R_p_pct",
    "R_b_pct",
)


class MetricsError(ValueError):
    """Raised on invalid metric inputs."""


@dataclass(frozen=True)
class ReductionResult:
    ratio: float
    eliminated: bool


def reduction_ratio(
    before: InterestProfile, after: InterestProfile, category: str
) -> ReductionResult:
    """How much a category's normalized profile share shrank.

    Ratios compare shares (weight / total) so injected obfuscation weight,
    which inflates the total, registers as a reduction even though raw
    weights never decrease. A post-run share at or below the floor marks
    the category as effectively eliminated.
    """
    before_share = before.share(category)
    after_share = after.share(category)
    if before_share <= 0:
        raise MetricsError(f"category {category} absent from the baseline profile")
    eliminated = after_share <= _SHARE_FLOOR
    ratio = before_share / max(after_share, _SHARE_FLOOR)
    return ReductionResult(ratio=ratio, eliminated=eliminated)


def total_utility(r_p: float, u_s: float) -> float:
    """Combined utility: profiling reduction plus obfuscation-app usability."""
    if r_p < 0 or u_s < 0:
        raise MetricsError("utility components must be non-negative")
    return r_p + u_s


def cost_ratio(n_obfs_apps: int, n_installed: int) -> float:
    """Operating cost proxy: obfuscation set size over the installed set size."""
    if n_installed <= 0:
        raise MetricsError("installed set must be non-empty")
    if n_obfs_apps < 0:
        raise MetricsError("obfuscation set size must be non-negative")
    return n_obfs_apps / n_installed


@dataclass(frozen=True)
class TradeoffPoint:
    scenario: str
    disruption_pct: float
    relevance: float
    U_T: float
    C: float
    R_c_bytes: int
    R_p_pct: float
    R_b_pct: float

    def row(self) -> list:
        return [
            self.scenario,
            f"{self.disruption_pct:.6f}",
            f"{self.relevance:.6f}",
            f"{self.U_T:.6f}",
            f"{self.C:.6f}",
            str(self.R_c_bytes),
            f"{self.R_p_pct:.6f}",
            f"{self.R_b_pct:.6f}",
        ]


def tradeoff_point(report) -> TradeoffPoint:
    """Build a trade-off curve point from a simulation run report."""
    return TradeoffPoint(
        scenario=report.scenario_name,
        disruption_pct=report.disruption_pct,
        relevance=report.relevance,
        U_T=report.total_utility,
        C=report.cost_ratio,
        R_c_bytes=report.resources.communication_bytes,
        R_p_pct=report.resources.cpu_pct,
        R_b_pct=report.resources.battery_pct,
    )


def tradeoff_curve(points: list[TradeoffPoint]) -> list[TradeoffPoint]:
    """Order points by rising disruption so the curve reads left to right.

    The result is a pure function of the point set: permuting the input
    leaves the output unchanged.
    """
    return sorted(
        points, key=lambda p: (p.disruption_pct, p.scenario)
    )


def tradeoff_to_csv(points: list[TradeoffPoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRADEOFF_COLUMNS)
    for point in tradeoff_curve(points):
        writer.writerow(point.row())
    return buf.getvalue()
