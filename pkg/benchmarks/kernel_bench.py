#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times each hot kernel on sweep-shaped workloads, then an end-to-end Monte
Carlo sweep under whichever backend the package selected at import (set
PZFSIM_KERNELS=python or =compiled before launching to pin it).

    python benchmarks/kernel_bench.py [--antennas 128] [--users 4]
                                      [--trials 1000] [--repeat 5]
"""

import argparse
import importlib
import time
import timeit

import numpy as np


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def kernel_rows(args):
    from pzfsim._kernels import _pure

    backends = {"pure": _pure}
    try:
        backends["compiled"] = importlib.import_module("pzfsim._kernels._core")
    except ImportError:
        print("note: compiled backend not built; showing pure-python only\n")

    rng = np.random.default_rng(0)
    h = (rng.standard_normal((args.users, args.antennas))
         + 1j * rng.standard_normal((args.users, args.antennas))) / np.sqrt(2)
    f = backends["pure"].phase_precoder(h)
    gains = np.ascontiguousarray(h @ f)
    powers = 10 ** np.linspace(-1, 1, 11)

    workloads = {
        "phase_precoder": lambda mod: mod.phase_precoder(h),
        "quantize_unit_phases(B=2)": lambda mod: mod.quantize_unit_phases(f, 2, True),
        "sum_se_over_powers(11 pts)": lambda mod: mod.sum_se_over_powers(gains, powers),
        "expint_scaled_sum(Nt, K/P=40)": lambda mod: mod.expint_scaled_sum(
            args.antennas, 40.0),
        "expint_scaled_sum(Nt, K/P=0.4)": lambda mod: mod.expint_scaled_sum(
            args.antennas, 0.4),
    }

    print(f"workload ({args.users} users x {args.antennas} antennas), "
          "best-of timings per call:")
    header = f"{'kernel':<34}" + "".join(f"{name:>14}" for name in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, call in workloads.items():
        times = {name: best_of(lambda m=mod: call(m), args.repeat, 200)
                 for name, mod in backends.items()}
        row = f"{label:<34}" + "".join(f"{t * 1e6:>12.1f}us" for t in times.values())
        if len(times) == 2:
            row += f"{times['pure'] / times['compiled']:>9.1f}x"
        print(row)
    print()


def sweep_row(args):
    import pzfsim

    config = pzfsim.SimulationConfig(
        antennas=args.antennas,
        users=args.users,
        channel="rayleigh",
        snr_grid_db=tuple(range(-10, 12, 2)),
        trials=args.trials,
        seed=1,
        schemes=("pzf", "pzf_quantized", "fczf"),
        quant_bits=2,
    )
    start = time.perf_counter()
    pzfsim.run_sweep(config)
    elapsed = time.perf_counter() - start
    print(f"end-to-end sweep ({args.trials} trials, 3 schemes, 11 SNRs) "
          f"with '{pzfsim.kernel_backend}' kernels: {elapsed:.2f}s "
          f"({args.trials / elapsed:.0f} trials/s)")


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--antennas", type=int, default=128)
    parser.add_argument("--users", type=int, default=4)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    kernel_rows(args)
    sweep_row(args)


if __name__ == "__main__":
    main()
