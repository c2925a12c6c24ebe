"""Time the compiled and numpy kernel backends on identical batches.

    python3 benchmarks/bench_kernels.py [--batch 20000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from sharpkato import kernels


def make_batch(count, n, d, seed):
    rng = np.random.default_rng(seed)
    grad = rng.standard_normal((count, n, d))
    hess = rng.standard_normal((count, n, n, d))
    return grad, 0.5 * (hess + hess.transpose(0, 2, 1, 3))


def cases(args):
    grad, hess = make_batch(args.batch, args.n, args.d, args.seed)
    p = 2.41
    return {
        "f_grid_argmin": lambda mod: mod.f_grid_argmin(p, args.n, 100_001),
        "project_p_harmonic": lambda mod: mod.project_p_harmonic(grad, hess.copy(), p),
        "p_residuals": lambda mod: mod.p_residuals(grad, hess, p),
        "jet_invariants": lambda mod: mod.jet_invariants(grad, hess),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--batch", type=int, default=20_000)
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--d", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    names = kernels.available_backends()
    print(f"batch={args.batch} n={args.n} d={args.d}; backends: {', '.join(names)}")
    print(f"{'kernel':<20}" + "".join(f"{b + ' ms':>14}" for b in names) + f"{'speedup':>10}")
    for label, fn in cases(args).items():
        times = {}
        for name in names:
            mod = kernels.get_backend(name)
            fn(mod)  # warm up
            times[name] = 1e3 * min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        speed = f"{times['python'] / times['cython']:.1f}x" if "cython" in times else "-"
        print(f"{label:<20}" + "".join(f"{times[b]:>14.2f}" for b in names) + f"{speed:>10}")


if __name__ == "__main__":
    main()
