#!/usr/bin/env python3
"""Sample a synthetic app population and report hourly ad-traffic volumes.

Usage:
    python3 scripts/run_traffic_calibration.py [--apps 270] [--seed 1]

Prints per-refresh-rate population shares and hourly volume statistics, plus
the fraction of apps landing in the expected volume bands (3.0-5.5 MB for
20/30 s refresh, 0.5-2.5 MB for 45/60 s).
"""

import argparse
import statistics
import sys
from collections import Counter, defaultdict

from obfusim.adsim import hourly_traffic_sample


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--apps", type=int, default=270)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    sample = hourly_traffic_sample(n_apps=args.apps, seed=args.seed)
    shares = Counter(r for r, _ in sample)
    by_rate = defaultdict(list)
    for rate, volume in sample:
        by_rate[rate].append(volume)

    print(f"{args.apps} apps, seed {args.seed}")
    for rate in sorted(by_rate):
        vols = by_rate[rate]
        print(
            f"  {rate:3d}s refresh: {100 * shares[rate] / args.apps:5.1f}% of apps, "
            f"hourly mean {statistics.mean(vols) / 1e6:5.2f} MB "
            f"(min {min(vols) / 1e6:.2f}, max {max(vols) / 1e6:.2f})"
        )

    fast = [v for r, v in sample if r in (20, 30)]
    slow = [v for r, v in sample if r in (45, 60)]
    fast_in = sum(1 for v in fast if 3.0e6 <= v <= 5.5e6) / len(fast) if fast else 0.0
    slow_in = sum(1 for v in slow if 0.5e6 <= v <= 2.5e6) / len(slow) if slow else 0.0
    print(f"20/30 s apps in 3.0-5.5 MB band: {100 * fast_in:.1f}%")
    print(f"45/60 s apps in 0.5-2.5 MB band: {100 * slow_in:.1f}%")
    return 0


if __name__ == "__main__":
    sys.exit(main())
