#!/usr/bin/env python3
"""Toy safety-certification demo on a contracting linear map.

States in [-2, 2] are unsafe iff |x| > 1 (the contraction never becomes
unsafe later), so the true unsafe probability is exactly 1/2.  The interval
estimate certifies that probability; the conformal side does not.
"""

import argparse
import sys
from fractions import Fraction

from berncert.binom import SeededStream
from berncert.experiments import linear_contraction_system, run_safety_demo


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-cal", type=int, default=100)
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--coverage", type=float, default=0.4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    system = linear_contraction_system()
    report = run_safety_demo(
        system,
        n_cal=args.n_cal,
        alpha=args.alpha,
        epsilon=Fraction(2, 3),
        coverage_E=args.coverage,
        stream=SeededStream(args.seed),
    )
    print(f"unsafe trajectories: {report.n_unsafe}/{report.n_cal}")
    print(
        f"interval estimate for unsafe probability "
        f"(alpha={args.alpha}): [{report.interval.lower:.6f}, {report.interval.upper:.6f}]"
    )
    print(f"conformal prediction set: {report.prediction.value}")
    print(
        f"coverage-event bound: confidence {report.pac_bound.confidence:.6f} "
        f"at E = {args.coverage}"
    )
    print(f"note: {report.note}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
