"""Compare the numba kernels with the pure-numpy fallback.

Each configuration runs in a fresh interpreter with ``LEARNDYN_NUMBA`` set,
so both paths see the same process state. Reports the first call (which
includes compilation or cache loading for numba) and the best of the
remaining repeats, and checks that both paths give the same trajectory.

Usage:
    python3 benchmarks/bench_kernels.py [--T 200] [--repeats 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from learndyn import DynamicsModel, simulate
from learndyn._jit import NUMBA_ENABLED
from learndyn.signals import example1_signal, example3_signal

T, repeats = float(sys.argv[1]), int(sys.argv[2])
cases = [("smith", example1_signal()), ("anticipatory", example3_signal()), ("predictive_rd", example3_signal())]
out = {"numba": NUMBA_ENABLED, "cases": {}}
for kind, sig in cases:
    model = DynamicsModel(kind, sig.n)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        traj = simulate(model, sig, T, 0.01)
        times.append(time.perf_counter() - t0)
    out["cases"][kind] = {"first": times[0], "best": min(times[1:] or times),
                          "final_average": traj.final_average}
print(json.dumps(out))
"""


def run(flag, T, repeats):
    env = dict(os.environ, LEARNDYN_NUMBA=flag)
    res = subprocess.run([sys.executable, "-c", WORKER, str(T), str(repeats)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, default=200.0)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    fast = run("1", args.T, args.repeats)
    slow = run("0", args.T, args.repeats)
    steps = int(args.T / 0.01)
    print(f"horizon T={args.T:g} ({steps} RK4 steps), numba available: {fast['numba']}")
    print(f"{'model':<16}{'numba first':>13}{'numba best':>12}{'numpy best':>12}{'speedup':>10}  agree")
    for kind, f in fast["cases"].items():
        s = slow["cases"][kind]
        agree = abs(f["final_average"] - s["final_average"]) <= 1e-12
        print(f"{kind:<16}{f['first']:>12.3f}s{f['best']:>11.3f}s{s['best']:>11.3f}s"
              f"{s['best'] / f['best']:>9.1f}x  {agree}")


if __name__ == "__main__":
    main()
