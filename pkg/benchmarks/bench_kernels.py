"""Benchmark the compiled kernel backend against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--reps 200000]

Two measurements:
* micro: raw right-hand-side evaluations per second for each backend;
* end-to-end: wall time of a fixed geodesic integration, run in a fresh
  subprocess per backend (backend selection happens at import time via the
  HARMGEO_PURE_PYTHON environment variable).
"""

import argparse
import os
import subprocess
import sys
import time


def micro(mod, reps: int) -> float:
    rhs = mod.sectoral_rhs
    t0 = time.perf_counter()
    theta, phi, td, pd = 1.2, 0.4, 0.3, 0.6
    for _ in range(reps):
        rhs(3, 0.2, theta, phi, td, pd)
    return time.perf_counter() - t0


END_TO_END = """
import time
from harmgeo import kernels
from harmgeo.geodesic import integrate, normalize_speed
from harmgeo.surface import PolarSurface

surf = PolarSurface.sectoral(3, 0.2)
y0 = normalize_speed(surf, [1.2, 0.4, 0.3, 0.6])
t0 = time.perf_counter()
traj = integrate(surf, y0, 500.0, n_samples=100, rtol=1e-10, atol=1e-10)
dt = time.perf_counter() - t0
print(f"{kernels.BACKEND} {dt:.4f} {max(abs(h - 1.0) for h in traj.h2):.3e}")
"""


def end_to_end(pure: bool) -> str:
    env = dict(os.environ)
    if pure:
        env["HARMGEO_PURE_PYTHON"] = "1"
    else:
        env.pop("HARMGEO_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    return out.stdout.strip()


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=200_000)
    args = ap.parse_args()

    from harmgeo import _kernels_py

    backends = [("python", _kernels_py)]
    try:
        from harmgeo import _kernels

        backends.insert(0, ("compiled", _kernels))
    except ImportError:
        print("compiled extension not available; benchmarking fallback only")

    print(f"micro-benchmark: {args.reps} sectoral_rhs evaluations")
    times = {}
    for name, mod in backends:
        dt = micro(mod, args.reps)
        times[name] = dt
        print(f"  {name:9s} {dt:8.3f} s   {args.reps / dt / 1e6:6.2f} M evals/s")
    if len(times) == 2:
        print(f"  speedup   {times['python'] / times['compiled']:.1f}x")

    print("end-to-end: 500 arc-length units of geodesic flow (backend, wall "
          "seconds, max |2H-1|)")
    for pure in (False, True):
        print(f"  {end_to_end(pure)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
