#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

Runs the same workloads twice in subprocesses, once per backend (the
backend is chosen at import time via ATOMPAIR_NO_NUMBA), and prints a
timing table. The pure path runs a scaled-down grid and the timing is
extrapolated per cell, so the script finishes quickly either way.

Usage: python scripts/benchmark.py [--full]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json
import sys
import time

import numpy as np

import atompair as ap
from atompair.sweeps import SweepSpec, run_events, run_region_map, time_grid

scale = float(sys.argv[1])

z = ap.DipoleOrientation.from_axis("z")
AV, TH = ap.BathKind.ACCELERATED_VACUUM, ap.BathKind.THERMAL_AT_UNRUH

# warm-up / compile pass
warm = SweepSpec(label="warm", initial_label="psi1",
                 initial=ap.catalogue_state("psi1", 0.25),
                 dipole1=z, dipole2=z, bath_modes=(AV, TH),
                 axes=(("a_over_omega", (0.5, 1.0)), ("omega_L", (1.0, 2.0))),
                 outputs=("region",))
run_region_map(warm)

results = {"backend": ap.backend_name()}

# spectral + coefficient assembly over a batch of points
n_pts = max(1, int(20000 * scale))
a_vals = np.linspace(0.05, 3.0, n_pts)
t0 = time.perf_counter()
acc = 0.0
for a in a_vals:
    A1, B1, A2, B2 = ap.kernels.assemble_kernel(a, 1.0, z.as_array(),
                                                z.as_array(), False, False)
    acc += A2
results["assemble_us_per_call"] = (time.perf_counter() - t0) / n_pts * 1e6

# trajectory kernel: 400-sample concurrence curves
n_traj = max(1, int(400 * scale))
taus = time_grid(50.0, 400)
state = ap.catalogue_state("psi1", 0.25)
cs = ap.assemble(ap.SystemParams(a_over_omega=0.5, omega_L=1.0, dipole1=z,
                                 dipole2=z, bath=AV))
t0 = time.perf_counter()
for _ in range(n_traj):
    ap.kernels.trajectory_kernel(cs.A1, cs.B1, cs.A2, cs.B2,
                                 state.populations(), state.cAS.real,
                                 state.cAS.imag, state.cGE.real,
                                 state.cGE.imag, taus)
results["trajectory_ms_per_curve"] = (time.perf_counter() - t0) / n_traj * 1e3

# region map cells (event detection, both bath modes)
n_side = max(3, int(round(40 * np.sqrt(scale))))
spec = SweepSpec(label="bench", initial_label="psi2",
                 initial=ap.catalogue_state("psi2", 0.2),
                 dipole1=z, dipole2=z, bath_modes=(AV, TH),
                 axes=(("a_over_omega", tuple(np.linspace(0.1, 3.0, n_side))),
                       ("omega_L", tuple(np.linspace(0.1, 5.0, n_side)))),
                 outputs=("region",))
t0 = time.perf_counter()
run_region_map(spec, threads=1)
dt = time.perf_counter() - t0
results["region_cells"] = n_side * n_side
results["region_ms_per_cell"] = dt / (n_side * n_side) * 1e3

print(json.dumps(results))
"""


def run_backend(no_numba, scale):
    env = dict(os.environ)
    if no_numba:
        env["ATOMPAIR_NO_NUMBA"] = "1"
    else:
        env.pop("ATOMPAIR_NO_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", WORKER, str(scale)],
                         capture_output=True, text=True, env=env)
    if out.returncode != 0:
        sys.stderr.write(out.stderr)
        raise SystemExit(1)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true",
                        help="run the pure-numpy path at full size (slow)")
    args = parser.parse_args()

    jit = run_backend(no_numba=False, scale=1.0)
    plain = run_backend(no_numba=True, scale=1.0 if args.full else 0.02)

    rows = [
        ("coefficient assembly [us/call]", "assemble_us_per_call"),
        ("trajectory, 400 samples [ms]", "trajectory_ms_per_curve"),
        ("region-map cell, 2 modes [ms]", "region_ms_per_cell"),
    ]
    name_w = max(len(r[0]) for r in rows)
    print(f"{'workload':<{name_w}}  {'numba':>12}  {'numpy':>12}  {'speedup':>8}")
    for name, key in rows:
        a, b = jit[key], plain[key]
        print(f"{name:<{name_w}}  {a:>12.4f}  {b:>12.4f}  {b / a:>7.1f}x")


if __name__ == "__main__":
    main()
