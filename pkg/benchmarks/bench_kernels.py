"""Compare the compiled and pure-numpy kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5] [--csv out.csv]
"""

import argparse
import csv
import sys
import time

import numpy as np

from nehari_shape import kernels
from nehari_shape.oracle.fem import Q1Mesh


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(sizes):
    rng = np.random.default_rng(0)
    for n in sizes:
        x = rng.standard_normal(n * n * 9)
        yield f"pairwise_sum n={x.size}", "pairwise_sum", (x,)
        mesh = Q1Mesh(n, n, 1.0)
        nq = mesh.shape.shape[0]
        coef = np.empty((mesh.ncell, nq, 2, 2))
        coef[..., 0, 0] = 1 + rng.random((mesh.ncell, nq))
        coef[..., 1, 1] = 1 + rng.random((mesh.ncell, nq))
        coef[..., 0, 1] = coef[..., 1, 0] = 0.1 * rng.random((mesh.ncell, nq))
        yield (f"q1_local_stiffness cells={mesh.ncell}", "q1_local_stiffness",
               (coef, mesh.dshape, mesh.qweights))
        yield (f"q1_local_mass cells={mesh.ncell}", "q1_local_mass",
               (coef[..., 0, 0], mesh.shape, mesh.qweights))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--sizes", type=int, nargs="+", default=[65, 129, 257])
    parser.add_argument("--csv", help="write results to this path")
    args = parser.parse_args(argv)

    backends = kernels.backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is timed", file=sys.stderr)
    rows = []
    for label, name, inputs in cases(args.sizes):
        timings, outputs = {}, {}
        for bname, mod in backends.items():
            timings[bname], outputs[bname] = _best(lambda: getattr(mod, name)(*inputs), args.repeat)
        ref = outputs["python"]
        identical = all(np.array_equal(np.asarray(o), np.asarray(ref)) for o in outputs.values())
        maxdiff = max(float(np.max(np.abs(np.asarray(o) - np.asarray(ref)))) for o in outputs.values())
        speedup = timings["python"] / timings["compiled"] if "compiled" in timings else float("nan")
        rows.append([label, f"{timings['python'] * 1e3:.3f}",
                     f"{timings.get('compiled', float('nan')) * 1e3:.3f}",
                     f"{speedup:.2f}", identical, f"{maxdiff:.1e}"])
    header = ["kernel", "python_ms", "compiled_ms", "speedup", "bit_identical", "max_abs_diff"]
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    for r in [header] + rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
