#!/usr/bin/env python3
"""Benchmark the summation backends: numba JIT kernels vs the numpy fallback.

Runs the direct sum and the treecode on one seeded instance under each
backend (spawning a fresh interpreter per backend, since the choice is made
at import time) and prints a timing table.

    python benchmarks/bench_backends.py [--n 10000] [--targets 1000] [--theta 0.5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys


def worker(n: int, m: int, theta: float) -> dict:
    import time

    import numpy as np

    import potentia as pt
    from potentia.potentials import potential_arrays, potential_treecode_arrays

    rng = np.random.Generator(np.random.Philox(42))
    locs = rng.uniform(0.0, 1.0, size=(n, 2))
    charge = pt.discrete_charge(2, locs, np.ones(n))
    ang = rng.uniform(0.0, 2.0 * np.pi, m)
    rad = rng.uniform(3.0, 5.0, m)
    targets = np.stack([0.5 + rad * np.cos(ang), 0.5 + rad * np.sin(ang)], axis=1)

    # warm both paths (JIT compilation, page-in) before timing
    potential_arrays(charge, targets[:2])
    potential_treecode_arrays(charge, targets[:2], theta)

    t0 = time.perf_counter()
    direct, _ = potential_arrays(charge, targets)
    t1 = time.perf_counter()
    tree, _ = potential_treecode_arrays(charge, targets, theta)
    t2 = time.perf_counter()
    rel = float(np.max(np.abs(tree - direct) / np.abs(direct)))
    return {
        "backend": pt.backend_name(),
        "direct_s": t1 - t0,
        "treecode_s": t2 - t1,
        "max_rel_err": rel,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=10_000, help="atom count")
    parser.add_argument("--targets", type=int, default=1_000, help="target count")
    parser.add_argument("--theta", type=float, default=0.5)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        print(json.dumps(worker(args.n, args.targets, args.theta)))
        return 0

    rows = []
    for backend in ("numba", "numpy"):
        env = dict(os.environ, POTENTIA_BACKEND=backend)
        out = subprocess.run(
            [sys.executable, __file__, "--worker", "--n", str(args.n),
             "--targets", str(args.targets), "--theta", str(args.theta)],
            capture_output=True, text=True, env=env,
        )
        if out.returncode != 0:
            print(f"{backend}: failed\n{out.stderr}", file=sys.stderr)
            continue
        rows.append(json.loads(out.stdout.strip().splitlines()[-1]))

    print(f"\nN={args.n} atoms, M={args.targets} targets, theta={args.theta}")
    print(f"{'backend':>8} {'direct':>10} {'treecode':>10} {'speedup':>8} {'rel err':>10}")
    for row in rows:
        print(
            f"{row['backend']:>8} {row['direct_s'] * 1e3:>8.1f}ms "
            f"{row['treecode_s'] * 1e3:>8.1f}ms "
            f"{row['direct_s'] / row['treecode_s']:>7.1f}x {row['max_rel_err']:>10.2e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
