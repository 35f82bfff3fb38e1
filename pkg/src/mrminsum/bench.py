"""SNR sweeps, worker-scaling runs and CSV output.

Every frame is the all-zero codeword plus AWGN. Frame ``f`` of SNR point ``p``
draws its noise from its own stream keyed by ``(seed, p * frames + f)``, so the
non-timing results depend only on the configuration.
"""

from __future__ import annotations

import csv
import hashlib
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import BinaryIO, Sequence

import numpy as np

from .channel import ChannelConfig, add_awgn, raw_bit_errors
from .decoder_mr import StageTimings, decode_batch
from .decoder_ref import DecodeOutcome, decode_ref
from .parity import ParityMatrix

CSV_HEADER = (
    "snr_db",
    "frames",
    "raw_ber",
    "decoded_ber",
    "fer",
    "avg_iterations",
    "wall_seconds",
    "throughput_bps",
)


@dataclass(frozen=True)
class SweepConfig:
    snr_points: Sequence[float] = (3.0, 3.2, 3.4)
    frames_per_point: int = 56
    max_iterations: int = 50
    check_every: int = 6
    workers: int = 1
    seed: int = 0
    decoder: str = "mapreduce"
    convention: str = "esn0"
    end_to_end: bool = False
    backend: str | None = None

    def __post_init__(self):
        if self.frames_per_point < 1:
            raise ValueError("frames_per_point must be >= 1")
        if self.max_iterations < 1 or self.check_every < 1 or self.workers < 1:
            raise ValueError("max_iterations, check_every and workers must be >= 1")
        if self.decoder not in ("reference", "mapreduce"):
            raise ValueError(f"decoder must be 'reference' or 'mapreduce', got {self.decoder!r}")


@dataclass
class PointResult:
    snr_db: float
    frames: int
    n: int
    decoded_bit_errors: int
    raw_bit_errors: int
    frame_errors: int
    undetected_frames: int
    total_iterations: int
    wall_seconds: float

    @property
    def raw_ber(self) -> float:
        return self.raw_bit_errors / (self.frames * self.n)

    @property
    def decoded_ber(self) -> float:
        return self.decoded_bit_errors / (self.frames * self.n)

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def avg_iterations(self) -> float:
        return self.total_iterations / self.frames

    @property
    def throughput_bps(self) -> float:
        return throughput(self.frames, self.n, self.wall_seconds)


@dataclass
class SweepResult:
    n: int
    points: list[PointResult] = field(default_factory=list)
    timings: StageTimings = field(default_factory=StageTimings)


def throughput(frames: int, n: int, seconds: float) -> float:
    """Decoded bits per second: ``frames * n / seconds``."""
    if seconds <= 0:
        return float("inf")
    return frames * n / seconds


def make_frames(h: ParityMatrix, cfg: ChannelConfig, count: int, first_index: int = 0) -> list[np.ndarray]:
    zero = -np.ones(h.n)  # modulated all-zero codeword
    return [add_awgn(zero, cfg, first_index + f) for f in range(count)]


def decode_frames(
    h: ParityMatrix,
    frames: Sequence[np.ndarray],
    cfg: SweepConfig,
    timings: StageTimings | None = None,
    workers: int | None = None,
) -> list[DecodeOutcome]:
    workers = cfg.workers if workers is None else workers
    if cfg.decoder == "mapreduce":
        return decode_batch(
            h, frames, cfg.max_iterations, cfg.check_every, workers, backend=cfg.backend, timings=timings
        )
    if workers == 1:
        return [decode_ref(h, r, cfg.max_iterations, cfg.check_every) for r in frames]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: decode_ref(h, r, cfg.max_iterations, cfg.check_every), frames))


def run_sweep(h: ParityMatrix, cfg: SweepConfig) -> SweepResult:
    result = SweepResult(h.n)
    for p, snr in enumerate(cfg.snr_points):
        ch = ChannelConfig(snr, h.rate, cfg.seed, cfg.convention)
        t0 = time.perf_counter()
        frames = make_frames(h, ch, cfg.frames_per_point, p * cfg.frames_per_point)
        t1 = time.perf_counter()
        outcomes = decode_frames(h, frames, cfg, result.timings)
        t2 = time.perf_counter()
        wall = t2 - (t0 if cfg.end_to_end else t1)
        result.points.append(_tally(snr, h.n, frames, outcomes, wall))
    return result


def _tally(snr: float, n: int, frames, outcomes, wall: float) -> PointResult:
    zero = np.zeros(n, dtype=np.uint8)
    decoded = sum(int(np.count_nonzero(o.hard)) for o in outcomes)
    raw = sum(raw_bit_errors(r, zero) for r in frames)
    bad = [o for o in outcomes if not o.is_codeword or o.hard.any()]
    undetected = sum(1 for o in bad if o.is_codeword)
    iters = sum(o.iterations for o in outcomes)
    return PointResult(float(snr), len(outcomes), n, decoded, raw, len(bad), undetected, iters, wall)


@dataclass(frozen=True)
class ScalingRow:
    workers: int
    wall_seconds: float
    throughput_bps: float
    outcome_digest: str


def outcomes_digest(outcomes: Sequence[DecodeOutcome]) -> str:
    """SHA-256 over every field of every outcome, in order."""
    d = hashlib.sha256()
    for o in outcomes:
        d.update(bytes([o.is_codeword]))
        d.update(int(o.iterations).to_bytes(8, "little"))
        d.update(np.ascontiguousarray(o.hard, dtype=np.uint8).tobytes())
        d.update(np.ascontiguousarray(o.soft, dtype=np.float64).tobytes())
    return d.hexdigest()


def scaling_study(h: ParityMatrix, cfg: SweepConfig, worker_counts: Sequence[int]) -> list[ScalingRow]:
    """Replay the same frame set once per worker count and time the decode."""
    frames = []
    for p, snr in enumerate(cfg.snr_points):
        ch = ChannelConfig(snr, h.rate, cfg.seed, cfg.convention)
        frames.extend(make_frames(h, ch, cfg.frames_per_point, p * cfg.frames_per_point))
    rows = []
    for w in worker_counts:
        t0 = time.perf_counter()
        outcomes = decode_frames(h, frames, cfg, workers=w)
        wall = time.perf_counter() - t0
        rows.append(ScalingRow(w, wall, throughput(len(frames), h.n, wall), outcomes_digest(outcomes)))
    return rows


def emit_csv(result: SweepResult, sink: BinaryIO, verbose: bool = False) -> None:
    """Write one row per SNR point. ``verbose`` adds an ``undetected_frames`` column."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (("undetected_frames",) if verbose else ()))
    for p in result.points:
        row = [
            _num(p.snr_db),
            str(p.frames),
            _num(p.raw_ber),
            _num(p.decoded_ber),
            _num(p.fer),
            _num(p.avg_iterations),
            _num(p.wall_seconds),
            _num(p.throughput_bps),
        ]
        if verbose:
            row.append(str(p.undetected_frames))
        w.writerow(row)
    sink.write(buf.getvalue().encode("ascii"))


def _num(x: float) -> str:
    return f"{x:.10g}"


def scaling_csv(rows: Sequence[ScalingRow], sink: BinaryIO) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("workers", "wall_seconds", "throughput_bps", "outcome_digest"))
    for r in rows:
        w.writerow((r.workers, _num(r.wall_seconds), _num(r.throughput_bps), r.outcome_digest))
    sink.write(buf.getvalue().encode("ascii"))
