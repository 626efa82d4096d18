"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_backends.py --size 512 --repeat 5
"""
import argparse
import statistics
import time

import numpy as np

from pdebin import _backend
from pdebin.edge_field import EdgeParams, gaussian_kernel
from pdebin.metrics import drd_weights
from pdebin.solver import SolverParams, evolve


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times), statistics.median(times)


def cases(size, rng):
    u = rng.uniform(-1, 1, (size, size))
    mask = (rng.uniform(size=(size, size)) < 0.3).astype(np.uint8)
    gt = (rng.uniform(size=(size, size)) < 0.3).astype(float)
    h = rng.uniform(0, 1, (size, size))

    def kernels():
        return _backend.kernels

    return {
        "smooth sigma=1": lambda: kernels().smooth(u, gaussian_kernel(1.0)),
        "structure tensor": lambda: kernels().structure_tensor_max(u, gaussian_kernel(0.4)),
        "euler update": lambda: kernels().euler_update(u, h, 0.0, 1.0, 1.0, 1.0, 0.95, 1.0, 1.0, 0.25),
        "zhang-suen": lambda: kernels().zhang_suen(mask),
        "drd total": lambda: kernels().drd_total(mask.astype(float), gt, drd_weights()),
        "evolve N=10": lambda: evolve(u, SolverParams(N=10), EdgeParams()),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    names = _backend.available()
    if len(names) < 2:
        print("compiled backend not built; only the fallback is timed")
    table = {}
    for name in names:
        with _backend.using(name):
            for label, fn in cases(args.size, np.random.default_rng(0)).items():
                fn()  # warm-up
                table.setdefault(label, {})[name] = _best(fn, args.repeat)

    print(f"{args.size}x{args.size}, best of {args.repeat} (ms)")
    header = f"{'kernel':<18}" + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, row in table.items():
        line = f"{label:<18}" + "".join(f"{row[n][0] * 1e3:>12.2f}" for n in names)
        if len(names) == 2:
            line += f"{row['python'][0] / row['cython'][0]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
