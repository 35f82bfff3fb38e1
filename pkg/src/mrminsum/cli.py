"""Command-line interface.

Exit status: 0 on success, 1 on usage errors, 2 on data or format errors.
"""

from __future__ import annotations

import argparse
import io
import logging
import sys
from pathlib import Path

import numpy as np

from . import bench
from .decoder_mr import StageTimings, decode_mr
from .decoder_ref import decode_ref
from .kernels import DEFAULT_BACKEND
from .parity import (
    ParityFormatError,
    ParityMatrix,
    expand_qc,
    parse_alist,
    parse_qc,
    random_qc_spec,
    serialize_alist,
    serialize_qc,
)

log = logging.getLogger("mrminsum")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("worker counts must be >= 1")
    return vals


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonnegative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mrminsum", description="Map-reduce Min-Sum LDPC decoder and benchmark harness.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def matrix_args(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--matrix", type=Path, help="parity matrix in alist format")
        g.add_argument("--qc", type=Path, help="quasi-cyclic layout to expand")

    def common(sp, check_every):
        sp.add_argument("--max-iters", type=_nonnegative, default=50)
        sp.add_argument("--check-every", type=_positive, default=check_every)
        sp.add_argument("--decoder", choices=("reference", "mapreduce"), default="mapreduce")
        sp.add_argument("--out", type=Path)
        sp.add_argument("--verbose", action="store_true")

    d = sub.add_parser("decode", help="decode one frame of channel values")
    matrix_args(d)
    d.add_argument("--llr", type=Path, required=True, help="one real value per line, length n")
    common(d, check_every=1)
    d.add_argument("--timings", action="store_true", help="append the per-stage timing table")

    for name, helptext in (("sweep", "BER/FER/throughput over SNR points"),
                           ("scaling", "throughput as a function of worker count")):
        s = sub.add_parser(name, help=helptext)
        matrix_args(s)
        s.add_argument("--snr", type=_float_list, default=[3.0, 3.2, 3.4])
        s.add_argument("--frames", type=_positive, default=56)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--snr-convention", choices=("esn0", "ebn0"), default="esn0")
        common(s, check_every=6)
        if name == "sweep":
            s.add_argument("--workers", type=_positive, default=1)
            s.add_argument("--end-to-end", action="store_true", help="include channel sampling in wall time")
            s.add_argument("--timings", action="store_true", help="append the per-stage timing table")
        else:
            s.add_argument("--workers", type=_int_list, default=[1, 2, 4, 8],
                           help="comma-separated worker counts")

    g = sub.add_parser("gen-qc", help="write a random quasi-cyclic layout")
    g.add_argument("--row-blocks", type=_positive, default=2)
    g.add_argument("--col-blocks", type=_positive, default=16)
    g.add_argument("--block-size", type=_positive, default=511)
    g.add_argument("--shifts-per-block", type=_positive, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path)
    g.add_argument("--verbose", action="store_true")

    c = sub.add_parser("convert", help="convert a QC layout or alist file to canonical alist")
    c.add_argument("--in", dest="inp", type=Path, required=True)
    c.add_argument("--out", type=Path)
    c.add_argument("--verbose", action="store_true")
    return p


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _load_any(path: Path) -> ParityMatrix:
    data = _read(path)
    first = data.split(b"\n", 1)[0].split()
    # a QC header has three fields, an alist header two
    if path.suffix == ".qc" or len(first) == 3:
        return expand_qc(parse_qc(data))
    return parse_alist(data)


def _load_matrix(args) -> ParityMatrix:
    if args.matrix is not None:
        h = parse_alist(_read(args.matrix))
    else:
        h = expand_qc(parse_qc(_read(args.qc)))
    log.info("parity matrix %dx%d, %d ones, kernels=%s", h.m, h.n, h.nnz, DEFAULT_BACKEND)
    return h


def _load_llr(path: Path, n: int) -> np.ndarray:
    text = _read(path).decode("ascii", errors="replace")
    try:
        vals = [float(t) for t in text.split()]
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    if len(vals) != n:
        raise DataError(f"{path}: {len(vals)} values, matrix has n={n}")
    r = np.array(vals)
    if not np.isfinite(r).all():
        raise DataError(f"{path}: non-finite value")
    return r


def _emit(args, payload: bytes) -> None:
    if args.out is not None:
        try:
            args.out.write_bytes(payload)
        except OSError as exc:
            raise DataError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def cmd_decode(args) -> bytes:
    h = _load_matrix(args)
    r = _load_llr(args.llr, h.n)
    if args.timings and args.decoder != "mapreduce":
        raise UsageError("--timings requires --decoder mapreduce")
    timings = StageTimings()
    if args.decoder == "mapreduce":
        out = decode_mr(h, r, args.max_iters, args.check_every, timings=timings)
    else:
        out = decode_ref(h, r, args.max_iters, args.check_every)
    lines = [
        f"is_codeword {'true' if out.is_codeword else 'false'}",
        f"iterations {out.iterations}",
        "hard " + "".join(map(str, out.hard.tolist())),
    ]
    if args.verbose:
        lines.append("soft " + " ".join(repr(float(v)) for v in out.soft))
    text = "\n".join(lines) + "\n"
    if args.timings:
        text += "\n" + timings.table()
    return text.encode("ascii")


def _sweep_config(args, workers: int) -> bench.SweepConfig:
    if args.max_iters < 1:
        raise UsageError("--max-iters must be >= 1 for sweeps")
    return bench.SweepConfig(
        snr_points=tuple(args.snr),
        frames_per_point=args.frames,
        max_iterations=args.max_iters,
        check_every=args.check_every,
        workers=workers,
        seed=args.seed,
        decoder=args.decoder,
        convention=args.snr_convention,
        end_to_end=getattr(args, "end_to_end", False),
    )


def cmd_sweep(args) -> bytes:
    h = _load_matrix(args)
    cfg = _sweep_config(args, args.workers)
    result = bench.run_sweep(h, cfg)
    buf = io.BytesIO()
    bench.emit_csv(result, buf, verbose=args.verbose)
    if args.timings:
        buf.write(b"\n" + result.timings.table().encode("ascii"))
    return buf.getvalue()


def cmd_scaling(args) -> bytes:
    h = _load_matrix(args)
    cfg = _sweep_config(args, 1)
    rows = bench.scaling_study(h, cfg, args.workers)
    if len({r.outcome_digest for r in rows}) != 1:
        raise DataError("decode outcomes differ between worker counts")
    buf = io.BytesIO()
    bench.scaling_csv(rows, buf)
    return buf.getvalue()


def cmd_gen_qc(args) -> bytes:
    if args.shifts_per_block > args.block_size:
        raise UsageError("--shifts-per-block cannot exceed --block-size")
    spec = random_qc_spec(args.row_blocks, args.col_blocks, args.block_size, args.shifts_per_block, args.seed)
    return serialize_qc(spec)


def cmd_convert(args) -> bytes:
    return serialize_alist(_load_any(args.inp))


COMMANDS = {
    "decode": cmd_decode,
    "sweep": cmd_sweep,
    "scaling": cmd_scaling,
    "gen-qc": cmd_gen_qc,
    "convert": cmd_convert,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        _emit(args, COMMANDS[args.command](args))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (DataError, ParityFormatError, ValueError) as exc:
        print(f"mrminsum: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
