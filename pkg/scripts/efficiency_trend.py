"""Average stopping time relative to C as the half-width shrinks.

    python scripts/efficiency_trend.py [--family lognormal] [--d 0.04 0.02 0.01] [--reps 500]
"""

import argparse
import sys
import time

from seqgini.harness import ExperimentConfig, run_experiment
from seqgini.sources import REFERENCE_SPECS, DistributionSpec


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", choices=tuple(REFERENCE_SPECS), default="lognormal")
    ap.add_argument("--d", type=float, nargs="+", default=[0.04, 0.02, 0.01])
    ap.add_argument("--alpha", type=float, default=0.1)
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    spec = DistributionSpec.reference(args.family)
    print(f"{spec.label()}  alpha={args.alpha}  R={args.reps}  seed={args.seed}")
    print(f"{'d':>8} {'N̄':>10} {'C':>7} {'N̄/C':>8} {'|N̄/C-1|':>10} {'p':>8}")
    for d in sorted(args.d, reverse=True):
        t0 = time.perf_counter()
        cfg = ExperimentConfig(
            spec, alpha=args.alpha, d=d, replications=args.reps, master_seed=args.seed, worker_count=args.workers
        )
        r = run_experiment(cfg)
        print(f"{d:>8g} {r.n_bar:>10.2f} {r.c_opt:>7d} {r.ratio:>8.4f} {abs(r.ratio - 1):>10.4f} {r.p:>8.4f}")
        print(f"d={d:g}: {time.perf_counter() - t0:.1f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
