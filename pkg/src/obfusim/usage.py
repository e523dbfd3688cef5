"""Time-binned app-usage traces, the variance objective, and flattening."""

from __future__ import annotations

import csv
import heapq
import io
from dataclasses import dataclass, field

DEFAULT_SLOT_SECONDS = 300


class UsageError(ValueError):
    """Raised on invalid traces, events, or flattening requests."""


@dataclass(frozen=True)
class UsageTrace:
    bins: tuple[int, ...]
    slot_seconds: int = DEFAULT_SLOT_SECONDS
    per_app: dict[int, dict[str, int]] = field(default_factory=dict)

    def __post_init__(self):
        if self.slot_seconds <= 0:
            raise UsageError("slot length must be positive")
        if any(b < 0 for b in self.bins):
            raise UsageError("bin values must be non-negative")

    @property
    def horizon_seconds(self) -> int:
        return len(self.bins) * self.slot_seconds


@dataclass(frozen=True)
class FlattenPlan:
    """Synthetic-usage insertions into idle / below-mean slots."""

    insertions: tuple[tuple[int, str, int], ...]  # (slot, app_id, units)
    budget_used: int

    def units_by_slot(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for slot, _, units in self.insertions:
            out[slot] = out.get(slot, 0) + units
        return out

    def apply(self, trace: UsageTrace) -> UsageTrace:
        bins = list(trace.bins)
        for slot, _, units in self.insertions:
            bins[slot] += units
        return UsageTrace(bins=tuple(bins), slot_seconds=trace.slot_seconds)


def bin_usage(
    events: list[tuple[float, str]],
    slot_seconds: int = DEFAULT_SLOT_SECONDS,
    horizon_seconds: int | None = None,
) -> UsageTrace:
    """Count events per time bin: bin[i] holds events with floor(ts/slot) == i."""
    if horizon_seconds is None:
        horizon_seconds = DEFAULT_SLOT_SECONDS * 288
    if horizon_seconds <= 0 or horizon_seconds % slot_seconds != 0:
        raise UsageError("horizon must be a positive multiple of the slot length")
    n_bins = horizon_seconds // slot_seconds
    bins = [0] * n_bins
    per_app: dict[int, dict[str, int]] = {}
    for ts, app_id in events:
        if ts < 0 or ts >= horizon_seconds:
            raise UsageError(f"event at {ts}s outside horizon {horizon_seconds}s")
        i = int(ts // slot_seconds)
        bins[i] += 1
        per_app.setdefault(i, {})
        per_app[i][app_id] = per_app[i].get(app_id, 0) + 1
    return UsageTrace(bins=tuple(bins), slot_seconds=slot_seconds, per_app=per_app)


def mean_usage(trace: UsageTrace) -> float:
    if not trace.bins:
        raise UsageError("mean of an empty trace")
    return sum(trace.bins) / len(trace.bins)


def usage_variance(trace: UsageTrace, reference: float) -> float:
    """Mean squared deviation of bins from a reference level."""
    if not trace.bins:
        raise UsageError("variance of an empty trace")
    return sum((b - reference) ** 2 for b in trace.bins) / len(trace.bins)


def flatten_plan(trace: UsageTrace, obfs_apps: list[str], budget: int) -> FlattenPlan:
    """Greedy water-filling toward the trace mean.

    One unit at a time goes to the currently lowest bin still strictly below
    the original mean (ties: lowest slot index); apps are assigned round-robin
    per unit. Stops when the budget is spent or no bin remains below the mean,
    so the resulting variance never exceeds the original.
    """
    if budget < 0:
        raise UsageError("budget must be non-negative")
    if budget > 0 and not obfs_apps:
        raise UsageError("non-zero budget requires at least one obfuscation app")
    if budget == 0:
        return FlattenPlan(insertions=(), budget_used=0)
    mean = mean_usage(trace)
    heap = [(value, slot) for slot, value in enumerate(trace.bins) if value < mean]
    heapq.heapify(heap)
    allocations: dict[tuple[int, str], int] = {}
    used = 0
    app_idx = 0
    while used < budget and heap:
        value, slot = heapq.heappop(heap)
        if value >= mean:
            continue
        app = obfs_apps[app_idx % len(obfs_apps)]
        app_idx += 1
        allocations[(slot, app)] = allocations.get((slot, app), 0) + 1
        used += 1
        if value + 1 < mean:
            heapq.heappush(heap, (value + 1, slot))
    insertions = tuple(
        (slot, app, units) for (slot, app), units in sorted(allocations.items())
    )
    return FlattenPlan(insertions=insertions, budget_used=used)


def expand_to_events(trace: UsageTrace, app_id: str = "app") -> list[tuple[float, str]]:
    """Inverse of bin_usage on counts: one event per unit at the bin start."""
    events = []
    for slot, count in enumerate(trace.bins):
        for _ in range(count):
            events.append((float(slot * trace.slot_seconds), app_id))
    return events


def trace_to_csv(trace: UsageTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["slot_index", "count"])
    for slot, count in enumerate(trace.bins):
        writer.writerow([slot, count])
    return buf.getvalue()


def trace_from_csv(text: str, slot_seconds: int = DEFAULT_SLOT_SECONDS) -> UsageTrace:
    reader = csv.DictReader(io.StringIO(text))
    rows = sorted((int(r["slot_index"]), int(r["count"])) for r in reader)
    if [slot for slot, _ in rows] != list(range(len(rows))):
        raise UsageError("trace CSV must cover contiguous slot indices from 0")
    return UsageTrace(bins=tuple(count for _, count in rows), slot_seconds=slot_seconds)
