"""Benchmark the numba fast path against the pure-numpy fallback.

Runs each hot kernel on quadrature-sized grids and one full adaptive
sector quadrature through both paths.  The numpy path is what you get
with POLYSCAT_NO_NUMBA=1; here both are imported side by side so a single
run prints the comparison.

    python3 benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np

from polyscat import _kernels


def timeit(fn, *args, repeat=5):
    fn(*args)  # warm up (numba JIT compile on first call)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    r = np.sort(rng.uniform(1e-8, 4.0, 900))
    wr = rng.uniform(0.1, 1.0, 900)
    th = np.sort(rng.uniform(-1.2, 1.4, 96))
    wt = rng.uniform(0.1, 1.0, 96)
    vals = rng.normal(size=(900, 96)) + 1j * rng.normal(size=(900, 96))

    cases = [
        ("u0_polar", (r, th, 50.0)),
        ("sector_quad_sum", (r, wr, th, wt, 50.0)),
        ("sector_abs_quad_sum", (r, wr, th, wt, 50.0, 0.5)),
        ("edge_quad_sum", (r, wr, vals[:, 0], 50.0, 0.8)),
        ("area_quad_sum", (r, wr, th, wt, vals, 50.0)),
    ]

    print(f"active kernel path: {_kernels.IMPL}")
    print(f"{'kernel':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>9}")
    if _kernels.IMPL != "numba":
        print("numba unavailable or disabled; timing the numpy path only")
    for name, args in cases:
        t_np = timeit(_kernels.NUMPY_IMPLS[name], *args) * 1e3
        if _kernels.IMPL == "numba":
            t_nb = timeit(getattr(_kernels, name), *args) * 1e3
            print(f"{name:<22}{t_nb:>12.3f}{t_np:>12.3f}{t_np / t_nb:>9.2f}x")
        else:
            print(f"{name:<22}{'-':>12}{t_np:>12.3f}{'-':>9}")

    # end-to-end: full adaptive sector quadrature through each path
    script = ("import time, numpy as np; from polyscat import cgo; "
              "sec = cgo.SectorSpec(0.0, np.pi/2); "
              "cgo.sector_integral_quad(sec, 100.0, tol=1e-14); "
              "t0 = time.perf_counter(); "
              "[cgo.sector_integral_quad(sec, s, tol=1e-14) "
              " for s in (1.0, 10.0, 100.0)]*5; "
              "print(f'{time.perf_counter()-t0:.3f}')")
    out = {}
    for label, env_val in (("numba", ""), ("numpy", "1")):
        env = dict(os.environ, POLYSCAT_NO_NUMBA=env_val)
        res = subprocess.run([sys.executable, "-c", script], env=env,
                             capture_output=True, text=True)
        out[label] = res.stdout.strip() or res.stderr.strip()
    print(f"\nsector_integral_quad x15 (subprocess): "
          f"numba {out['numba']}s vs numpy {out['numpy']}s")


if __name__ == "__main__":
    main()
