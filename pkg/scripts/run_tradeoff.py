#!/usr/bin/env python3
"""Run the shipped disruption scenarios and print the trade-off curve.

Usage:
    python3 scripts/run_tradeoff.py [--targets] [--out tradeoff.csv]

With --targets the fixed-disruption scenario set (10/30/80 percent) runs
instead of the default low/medium/high set.
"""

import argparse
import sys
from pathlib import Path

from obfusim.adsim import load_scenario, run_simulation
from obfusim.cli import atomic_write
from obfusim.metrics import tradeoff_point, tradeoff_to_csv

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--targets", action="store_true",
                        help="use the fixed 10/30/80 percent disruption scenarios")
    parser.add_argument("--out", help="also write the curve to this CSV path")
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args()

    names = ["low_10", "medium_30", "high_80"] if args.targets else ["low", "medium", "high"]
    points = []
    for name in names:
        scenario = load_scenario(SCENARIOS / f"{name}.yaml")
        report = run_simulation(scenario, seed=args.seed)
        points.append(tradeoff_point(report))
        print(
            f"{name:10s} disruption {report.disruption_pct:6.2f}%  "
            f"relevance {report.relevance:.4f}  U_T {report.total_utility:.3f}  "
            f"traffic {report.traffic_bytes / 1e6:.1f} MB"
        )
    csv_text = tradeoff_to_csv(points)
    if args.out:
        atomic_write(Path(args.out), csv_text)
        print(f"wrote {args.out}")
    else:
        print()
        print(csv_text, end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
