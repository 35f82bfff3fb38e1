"""Map-reduce Min-Sum decoder.

One iteration is a fixed pipeline of dense m x n stages: fan the soft vector
out over the rows of H, reduce every row to four numbers (smallest magnitude,
its column, second smallest magnitude, sign parity), rebuild the check
messages from those four numbers, and sum the messages down the columns.
Nothing in the pipeline depends on where the ones of H are, only on its
shape.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .decoder_ref import DecodeOutcome
from .kernels import get_backend
from .parity import ParityMatrix

STAGES = (
    "fan_out",
    "find_minima",
    "sign_reduce",
    "produce_new_matrix",
    "sum_vertical",
    "add_channel",
    "slicer",
    "syndrome_product",
    "mod2",
    "is_codeword_check",
    "matrix_minus",
)


class StageTimings:
    """Accumulated wall-clock nanoseconds per pipeline stage."""

    def __init__(self):
        self.ns = dict.fromkeys(STAGES, 0)

    def merge(self, other: "StageTimings") -> None:
        for k, v in other.ns.items():
            self.ns[k] += v

    def total_ns(self) -> int:
        return sum(self.ns.values())

    def rows(self) -> list[tuple[str, int]]:
        """(stage, nanoseconds) sorted by descending time."""
        return sorted(self.ns.items(), key=lambda kv: (-kv[1], STAGES.index(kv[0])))

    def table(self) -> str:
        lines = ["stage nanoseconds"]
        lines.extend(f"{name} {ns}" for name, ns in self.rows())
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"StageTimings(total_ns={self.total_ns()})"


@dataclass(frozen=True)
class RowSummary:
    """The four per-row reduction vectors, each of length m."""

    min0: np.ndarray
    min1: np.ndarray
    min0_location: np.ndarray
    sign_parity: np.ndarray


def _llr(v, n: int) -> np.ndarray:
    v = np.ascontiguousarray(v, dtype=np.float64)
    if v.shape != (n,):
        raise ValueError(f"soft vector has shape {v.shape}, expected ({n},)")
    if not np.isfinite(v).all():
        raise ValueError("soft vector contains NaN or infinite values")
    return v


def fan_out(v, h: ParityMatrix, eta: np.ndarray | None = None, *, backend=None) -> np.ndarray:
    """``lambda(i, j) = v(j) H(i, j) - eta(i, j)``; ``eta`` absent means zero."""
    k = get_backend(backend)
    v = _llr(v, h.n)
    lam = np.empty(h.shape, dtype=np.float64)
    k.masked_fan_out(h.entries, v, lam)
    if eta is not None:
        eta = np.ascontiguousarray(eta, dtype=np.float64)
        if eta.shape != h.shape:
            raise ValueError(f"eta has shape {eta.shape}, expected {h.shape}")
        k.matrix_minus(lam, eta)
    return lam


def reduce_rows(lam: np.ndarray, h: ParityMatrix, *, backend=None) -> RowSummary:
    k = get_backend(backend)
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    if lam.shape != h.shape:
        raise ValueError(f"lambda has shape {lam.shape}, expected {h.shape}")
    if any(len(a) < 2 for a in h.row_adj):
        raise ValueError("every row needs degree >= 2")
    m = h.m
    min0, min1, sgn = np.empty(m), np.empty(m), np.empty(m)
    loc = np.empty(m, dtype=np.int64)
    k.find_minima(h.entries, lam, min0, min1, loc)
    k.sign_reduce(h.entries, lam, sgn)
    return RowSummary(min0, min1, loc, sgn)


def produce_eta(summary: RowSummary, lam: np.ndarray, h: ParityMatrix, *, backend=None) -> np.ndarray:
    k = get_backend(backend)
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    if lam.shape != h.shape:
        raise ValueError(f"lambda has shape {lam.shape}, expected {h.shape}")
    eta = np.empty(h.shape, dtype=np.float64)
    k.produce_new_matrix(
        h.entries, lam, summary.min0, summary.min1, summary.min0_location, summary.sign_parity, eta
    )
    return eta


def column_sum(eta: np.ndarray, r, *, backend=None) -> np.ndarray:
    """``s(j) = sum_i eta(i, j) + r(j)``, rows summed in ascending order."""
    k = get_backend(backend)
    eta = np.ascontiguousarray(eta, dtype=np.float64)
    r = _llr(r, eta.shape[1])
    acc = np.empty(eta.shape[1])
    s = np.empty(eta.shape[1])
    k.sum_vertical(eta, acc)
    k.add_channel(acc, r, s)
    return s


class MinSumDecoder:
    """Reusable decoder for one parity matrix.

    Holds the dense work buffers, so one instance must not decode two frames
    at the same time. ``timings`` accumulates across calls to :meth:`decode`.
    """

    def __init__(self, h: ParityMatrix, backend: str | None = None):
        self.h = h
        self.kernels = get_backend(backend)
        m, n = h.shape
        self.lam = np.zeros((m, n))
        self.eta = np.zeros((m, n))
        self.min0 = np.empty(m)
        self.min1 = np.empty(m)
        self.loc = np.empty(m, dtype=np.int64)
        self.sgn = np.empty(m)
        self.acc = np.empty(n)
        self.counts = np.empty(m, dtype=np.int64)
        self.col_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum([len(a) for a in h.col_adj], out=self.col_ptr[1:])
        self.col_rows = (
            np.concatenate(h.col_adj).astype(np.int64) if h.n else np.zeros(0, dtype=np.int64)
        )
        if any(len(a) < 2 for a in h.row_adj):
            raise ValueError("every row needs degree >= 2")
        self.timings = StageTimings()

    def decode(self, r, max_iterations: int = 50, check_every: int = 1, trace: list | None = None) -> DecodeOutcome:
        if max_iterations < 0 or check_every < 1:
            raise ValueError("max_iterations must be >= 0 and check_every >= 1")
        h, K, tm = self.h, self.kernels, self.timings.ns
        r = _llr(r, h.n)
        H, lam, eta = h.entries, self.lam, self.eta
        s = np.empty(h.n)
        b = np.empty(h.n, dtype=np.uint8)
        clock = time.perf_counter_ns

        t0 = clock()
        K.masked_fan_out(H, r, lam)
        t1 = clock()
        K.slicer(r, b)
        t2 = clock()
        ok = self._check(b, tm)
        tm["fan_out"] += t1 - t0
        tm["slicer"] += t2 - t1
        if ok:
            return DecodeOutcome(True, 0, b, r.copy())

        s[:] = r
        k = 0
        while k < max_iterations:
            t0 = clock()
            K.find_minima(H, lam, self.min0, self.min1, self.loc)
            t1 = clock()
            K.sign_reduce(H, lam, self.sgn)
            t2 = clock()
            K.produce_new_matrix(H, lam, self.min0, self.min1, self.loc, self.sgn, eta)
            t3 = clock()
            K.sum_vertical(eta, self.acc)
            t4 = clock()
            K.add_channel(self.acc, r, s)
            t5 = clock()
            tm["find_minima"] += t1 - t0
            tm["sign_reduce"] += t2 - t1
            tm["produce_new_matrix"] += t3 - t2
            tm["sum_vertical"] += t4 - t3
            tm["add_channel"] += t5 - t4
            k += 1
            if trace is not None:
                trace.append(s.copy())
            if k % check_every == 0 or k == max_iterations:
                t0 = clock()
                K.slicer(s, b)
                tm["slicer"] += clock() - t0
                if self._check(b, tm):
                    return DecodeOutcome(True, k, b, s)
            t0 = clock()
            K.masked_fan_out(H, s, lam)
            t1 = clock()
            K.matrix_minus(lam, eta)
            t2 = clock()
            tm["fan_out"] += t1 - t0
            tm["matrix_minus"] += t2 - t1
        if max_iterations == 0:
            return DecodeOutcome(False, 0, b, r.copy())
        return DecodeOutcome(False, k, b, s)

    def _check(self, b: np.ndarray, tm: dict) -> bool:
        K, clock = self.kernels, time.perf_counter_ns
        t0 = clock()
        K.syndrome_product(self.col_ptr, self.col_rows, b, self.counts)
        t1 = clock()
        K.mod2(self.counts)
        t2 = clock()
        ok = K.is_codeword_check(self.counts)
        t3 = clock()
        tm["syndrome_product"] += t1 - t0
        tm["mod2"] += t2 - t1
        tm["is_codeword_check"] += t3 - t2
        return bool(ok)


def decode_mr(
    h: ParityMatrix,
    r,
    max_iterations: int = 50,
    check_every: int = 1,
    *,
    timings: StageTimings | None = None,
    trace: list | None = None,
    backend: str | None = None,
) -> DecodeOutcome:
    """Decode one frame with the map-reduce pipeline.

    Stage timings are added to ``timings`` when it is given.
    """
    dec = MinSumDecoder(h, backend)
    out = dec.decode(r, max_iterations, check_every, trace)
    if timings is not None:
        timings.merge(dec.timings)
    return out


def decode_batch(
    h: ParityMatrix,
    frames: Iterable,
    max_iterations: int = 50,
    check_every: int = 1,
    workers: int = 1,
    *,
    backend: str | None = None,
    timings: StageTimings | None = None,
) -> list[DecodeOutcome]:
    """Decode frames concurrently; output order and content match sequential decoding.

    Each worker thread owns one :class:`MinSumDecoder`. The kernels release the
    GIL, so threads run the dense stages in parallel.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    frames: Sequence = list(frames)
    if not frames:
        return []
    if workers == 1:
        dec = MinSumDecoder(h, backend)
        out = [dec.decode(r, max_iterations, check_every) for r in frames]
        if timings is not None:
            timings.merge(dec.timings)
        return out

    local = threading.local()
    decoders: list[MinSumDecoder] = []
    lock = threading.Lock()

    def work(r):
        dec = getattr(local, "dec", None)
        if dec is None:
            dec = local.dec = MinSumDecoder(h, backend)
            with lock:
                decoders.append(dec)
        return dec.decode(r, max_iterations, check_every)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        out = list(pool.map(work, frames))
    if timings is not None:
        for dec in decoders:
            timings.merge(dec.timings)
    return out
