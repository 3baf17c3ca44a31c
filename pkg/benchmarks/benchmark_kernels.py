"""Compare the numba and numpy kernel backends on the hot counting loops.

Run:  python3 benchmarks/benchmark_kernels.py [--size 512] [--repeats 5]

Each kernel is warmed up first (the numba path compiles on first call),
then timed with perf_counter over the given number of repeats; the table
reports the best time per backend and the speedup of numba over numpy.
"""

import argparse
import time

import numpy as np

from edgelbp import kernels
from edgelbp.edms import compute_edm1, rank_directions
from edgelbp.glcm import quantize
from edgelbp.imaging import binarize_otsu, extract_edges


def best_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def build_cases(size, rng):
    # edge kernels see a realistic sparse edge map (a rasterized disk);
    # texture kernels see dense noise, which exercises every pixel anyway
    gray = rng.integers(0, 256, size=(size, size), dtype=np.int64).astype(np.uint8)
    yy, xx = np.mgrid[0:size, 0:size]
    radius = 0.4 * size
    shape = np.where((yy - size / 2) ** 2 + (xx - size / 2) ** 2 <= radius**2, 0, 255)
    edges = extract_edges(binarize_otsu(shape.astype(np.uint8)))
    ranking = rank_directions(compute_edm1(edges))
    quantized = quantize(gray, 16)
    return [
        ("edm1_counts", lambda: kernels.edm1_counts(edges)),
        ("edm2_counts", lambda: kernels.edm2_counts(edges, ranking)),
        ("lbp_code_map", lambda: kernels.lbp_code_map(gray)),
        ("glcm_counts", lambda: kernels.glcm_counts(quantized, 1, 0, 16)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=512, help="test image side")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "numba" not in backends:
        print("numba backend unavailable; timing numpy only")

    rng = np.random.Generator(np.random.PCG64(0))
    cases = build_cases(args.size, rng)

    results = {}
    for backend in backends:
        kernels.set_backend(backend)
        for name, fn in cases:
            fn()  # warmup: first numba call compiles
            results[(backend, name)] = best_time(fn, args.repeats)
    kernels.set_backend("auto")

    print(f"\nkernel timings on {args.size}x{args.size}, best of {args.repeats}:\n")
    header = f"{'kernel':<14}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for name, _ in cases:
        row = f"{name:<14}"
        for backend in backends:
            row += f"{results[(backend, name)] * 1e3:>10.3f}ms"
        if len(backends) > 1:
            ratio = results[("numpy", name)] / results[("numba", name)]
            row += f"{ratio:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
