"""Compare the compiled and numpy kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--block-size 511] [--frames 2] [--repeat 5]

Prints median nanoseconds per kernel call for each backend, then the wall time
of full decodes, and checks that both backends return identical outcomes.
"""

import argparse
import statistics
import time

import numpy as np

from mrminsum import ChannelConfig, expand_qc
from mrminsum.bench import make_frames
from mrminsum.decoder_mr import MinSumDecoder
from mrminsum.kernels import available_backends, get_backend
from mrminsum.parity import random_qc_spec


def _median_ns(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    return statistics.median(samples)


def kernel_times(h, r, backend, repeat):
    K = get_backend(backend)
    m, n = h.shape
    H = h.entries
    lam, eta = np.empty((m, n)), np.empty((m, n))
    min0, min1, sgn = np.empty(m), np.empty(m), np.empty(m)
    loc = np.empty(m, dtype=np.int64)
    acc, s = np.empty(n), np.empty(n)
    b = np.empty(n, dtype=np.uint8)
    counts = np.empty(m, dtype=np.int64)
    dec = MinSumDecoder(h, backend)
    K.masked_fan_out(H, r, lam)
    calls = {
        "masked_fan_out": lambda: K.masked_fan_out(H, r, lam),
        "matrix_minus": lambda: K.matrix_minus(lam, eta),
        "find_minima": lambda: K.find_minima(H, lam, min0, min1, loc),
        "sign_reduce": lambda: K.sign_reduce(H, lam, sgn),
        "produce_new_matrix": lambda: K.produce_new_matrix(H, lam, min0, min1, loc, sgn, eta),
        "sum_vertical": lambda: K.sum_vertical(eta, acc),
        "add_channel": lambda: K.add_channel(acc, r, s),
        "slicer": lambda: K.slicer(s, b),
        "syndrome_product": lambda: K.syndrome_product(dec.col_ptr, dec.col_rows, b, counts),
    }
    eta.fill(0.0)
    return {name: _median_ns(fn, repeat) for name, fn in calls.items()}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--block-size", type=int, default=511)
    ap.add_argument("--frames", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--snr", type=float, default=3.0)
    ap.add_argument("--max-iters", type=int, default=50)
    args = ap.parse_args()

    h = expand_qc(random_qc_spec(2, 16, args.block_size, 2, seed=0))
    frames = make_frames(h, ChannelConfig(args.snr, h.rate, seed=1), args.frames)
    backends = available_backends()
    print(f"code {h.m}x{h.n}, {h.nnz} ones; backends: {', '.join(backends)}")

    per_kernel = {be: kernel_times(h, frames[0], be, args.repeat) for be in backends}
    header = f"{'kernel':<20}" + "".join(f"{be + ' ns':>16}" for be in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name in per_kernel[backends[0]]:
        vals = [per_kernel[be][name] for be in backends]
        line = f"{name:<20}" + "".join(f"{v:>16.0f}" for v in vals)
        if len(vals) == 2:
            line += f"{vals[1] / vals[0]:>10.1f}"
        print(line)

    outcomes = {}
    for be in backends:
        dec = MinSumDecoder(h, be)
        t0 = time.perf_counter()
        outcomes[be] = [dec.decode(r, args.max_iters, 6) for r in frames]
        wall = time.perf_counter() - t0
        iters = sum(o.iterations for o in outcomes[be])
        print(f"decode {be}: {wall:.2f}s for {len(frames)} frames, {iters} iterations, "
              f"{len(frames) * h.n / wall:.0f} bits/s")
    if len(backends) == 2:
        same = outcomes[backends[0]] == outcomes[backends[1]]
        print(f"backends agree: {same}")


if __name__ == "__main__":
    main()
