"""Time the compiled kernels against their numpy twins.

    python -m benchmarks.bench_kernels [--repeats N] [--quick]
"""

import argparse
import time

import numpy as np

from orliczops import kernels


def _cases(quick):
    rng = np.random.default_rng(0)
    n_sum = 10 ** 5 if quick else 10 ** 7
    values = 1.0 / (np.arange(n_sum, dtype=float) + 2.0)
    dims = (4, 8) if quick else (4, 8, 16, 32)
    cases = [
        (f"power_sum n={n_sum:.0e}", lambda m: m.power_sum(2, n_sum + 1, 1.5)),
        (f"monomial_sum n={n_sum:.0e}", lambda m: m.monomial_sum(values, 3.0, 1.0, 2.5)),
        (f"cosh_sum n={n_sum:.0e}", lambda m: m.cosh_sum(values, 3.0)),
    ]
    for d in dims:
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        cases.append((f"jacobi_svd {d}x{d}", lambda m, a=a: m.jacobi_svd(a, False, 1e-15, 80)))
        cases.append((f"jacobi_svd+uv {d}x{d}", lambda m, a=a: m.jacobi_svd(a, True, 1e-15, 80)))
    return cases


def run(repeats=5, quick=False):
    """Best-of-``repeats`` wall time per (case, backend)."""
    rows = []
    for case, fn in _cases(quick):
        for name in kernels.available_backends():
            mod = kernels.get_module(name)
            best = float("inf")
            for _ in range(repeats):
                t0 = time.perf_counter()
                fn(mod)
                best = min(best, time.perf_counter() - t0)
            rows.append({"case": case, "backend": name, "seconds": best})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    rows = run(args.repeats, args.quick)
    by_case = {}
    for r in rows:
        by_case.setdefault(r["case"], {})[r["backend"]] = r["seconds"]
    print(f"{'case':28s} {'compiled':>12s} {'python':>12s} {'speedup':>8s}")
    for case, t in by_case.items():
        c, p = t.get("compiled"), t["python"]
        cs = f"{c * 1e3:10.3f}ms" if c is not None else f"{'n/a':>12s}"
        sp = f"{p / c:7.1f}x" if c else f"{'':>8s}"
        print(f"{case:28s} {cs} {p * 1e3:10.3f}ms {sp}")


if __name__ == "__main__":
    main()
