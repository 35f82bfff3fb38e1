"""Tanner-graph Min-Sum decoder.

Messages live on edges and are updated with plain Python floats, one check and
one bit at a time. Nothing here shares code with the map-reduce decoder; it is
kept deliberately literal so it can serve as the oracle for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .parity import ParityMatrix, is_codeword


@dataclass(frozen=True, eq=False)
class DecodeOutcome:
    """Result of decoding one frame.

    ``iterations`` is 0 when the channel values already sliced to a codeword,
    and equals the iteration cap when decoding failed.
    """

    is_codeword: bool
    iterations: int
    hard: np.ndarray
    soft: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecodeOutcome):
            return NotImplemented
        return (
            self.is_codeword == other.is_codeword
            and self.iterations == other.iterations
            and np.array_equal(self.hard, other.hard)
            and np.array_equal(self.soft, other.soft)
        )

    __hash__ = None


def _sign(x: float) -> int:
    return 1 if x >= 0.0 else -1


def check_node_update(inputs: Sequence[float]) -> list[float]:
    """Leave-one-out minimum magnitude times leave-one-out sign product.

    ``inputs`` are the values ``lambda_k - eta_prev[k]`` over one check's bits.
    sign(0) is taken as +1.

    >>> check_node_update([-0.5, 2.0, -1.0])
    [-1.0, 0.5, -0.5]
    """
    d = len(inputs)
    if d < 2:
        raise ValueError(f"check degree {d}; need at least 2")
    out = []
    for j in range(d):
        mag = min(abs(inputs[k]) for k in range(d) if k != j)
        sgn = 1
        for k in range(d):
            if k != j:
                sgn *= _sign(inputs[k])
        out.append(mag * sgn)
    return out


def bit_node_update(r_j: float, incoming: Sequence[float]) -> float:
    """Sum of incoming check messages (ascending check order) plus the channel value."""
    acc = 0.0
    for v in incoming:
        acc += v
    return acc + r_j


def slice_hard(s) -> np.ndarray:
    return (np.asarray(s, dtype=np.float64) > 0.0).astype(np.uint8)


def decode_ref(
    h: ParityMatrix,
    r,
    max_iterations: int = 50,
    check_every: int = 1,
    trace: list | None = None,
) -> DecodeOutcome:
    """Decode one frame by message passing on the Tanner graph of ``h``.

    Parameters
    ----------
    h : ParityMatrix
    r : array_like
        Channel values, length ``h.n``. Positive means bit 1.
    max_iterations : int
        Iteration cap ``L``.
    check_every : int
        Test for a codeword only on iterations that are multiples of this,
        and always on the last one.
    trace : list, optional
        If given, the soft vector after every iteration is appended to it.
    """
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (h.n,):
        raise ValueError(f"received vector has shape {r.shape}, expected ({h.n},)")
    if max_iterations < 0 or check_every < 1:
        raise ValueError("max_iterations must be >= 0 and check_every >= 1")

    hard = slice_hard(r)
    if is_codeword(h, hard):
        return DecodeOutcome(True, 0, hard, r.copy())

    r_list = r.tolist()
    rows = [a.tolist() for a in h.row_adj]
    # for each bit: (check, position of the bit inside that check's list), ascending check
    pos = [{j: t for t, j in enumerate(row)} for row in rows]
    bit_edges = [[(int(i), pos[int(i)][j]) for i in h.col_adj[j]] for j in range(h.n)]

    lam = list(r_list)
    eta = [[0.0] * len(row) for row in rows]
    k = 0
    while k < max_iterations:
        eta = [
            check_node_update([lam[j] - eta_prev[t] for t, j in enumerate(row)])
            for row, eta_prev in zip(rows, eta)
        ]
        lam = [
            bit_node_update(r_list[j], [eta[i][t] for i, t in bit_edges[j]])
            for j in range(h.n)
        ]
        k += 1
        if trace is not None:
            trace.append(np.array(lam))
        if k % check_every == 0 or k == max_iterations:
            hard = slice_hard(lam)
            if is_codeword(h, hard):
                return DecodeOutcome(True, k, hard, np.array(lam))
    return DecodeOutcome(False, k, slice_hard(lam), np.array(lam))
