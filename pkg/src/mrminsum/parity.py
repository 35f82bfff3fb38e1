"""Parity matrices: construction, alist and quasi-cyclic formats, GF(2) syndromes.

Indices are 0-based everywhere in memory. The alist reader and writer convert
to and from the 1-based indices used on disk.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class ParityFormatError(ValueError):
    """Raised for malformed or inconsistent parity-matrix input."""


@dataclass(frozen=True, eq=False)
class ParityMatrix:
    """Binary m x n parity matrix with precomputed adjacency.

    ``entries`` is a dense C-contiguous ``uint8`` grid. ``row_adj[i]`` lists the
    columns set in row ``i`` and ``col_adj[j]`` the rows set in column ``j``,
    both strictly ascending. Instances are read-only and may be shared freely
    between threads.
    """

    entries: np.ndarray
    row_adj: tuple[np.ndarray, ...] = field(repr=False)
    col_adj: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def nnz(self) -> int:
        return int(sum(len(a) for a in self.row_adj))

    @property
    def rate(self) -> float:
        """Design rate ``(n - m) / n``."""
        return (self.n - self.m) / self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParityMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.shape, self.entries.tobytes()))

    @classmethod
    def from_dense(cls, dense, *, strict_degree: bool = True) -> "ParityMatrix":
        """Build from any 2-D array of zeros and ones."""
        arr = np.asarray(dense)
        if arr.ndim != 2:
            raise ParityFormatError(f"parity matrix must be 2-D, got shape {arr.shape}")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ParityFormatError("parity matrix entries must be 0 or 1")
        entries = np.ascontiguousarray(arr, dtype=np.uint8)
        if strict_degree:
            degrees = entries.sum(axis=1)
            bad = np.flatnonzero(degrees < 2)
            if bad.size:
                raise ParityFormatError(
                    f"row {int(bad[0])} has degree {int(degrees[bad[0]])}; every check needs at least 2 bits"
                )
        entries.setflags(write=False)
        row_adj = tuple(_frozen(np.flatnonzero(row)) for row in entries)
        col_adj = tuple(_frozen(np.flatnonzero(col)) for col in entries.T)
        return cls(entries, row_adj, col_adj)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64)
    a.setflags(write=False)
    return a


def build_parity_matrix(rows: Iterable[Iterable[int]], n: int) -> ParityMatrix:
    """Build a parity matrix from 1-based index sets, one per check.

    >>> build_parity_matrix([{1, 2}], 2).entries.tolist()
    [[1, 1]]
    """
    rows = [sorted(set(r)) for r in rows]
    dense = np.zeros((len(rows), n), dtype=np.uint8)
    for i, idx in enumerate(rows):
        for j in idx:
            if not 1 <= j <= n:
                raise ParityFormatError(f"check {i + 1}: index {j} outside 1..{n}")
        if len(idx) < 2:
            raise ParityFormatError(f"check {i + 1} has degree {len(idx)}; need at least 2")
        dense[i, [j - 1 for j in idx]] = 1
    return ParityMatrix.from_dense(dense)


# -- alist -------------------------------------------------------------------


def parse_alist(text: bytes | str, *, strict_degree: bool = True) -> ParityMatrix:
    """Parse MacKay alist text.

    Column and row adjacency sections are both required and must describe the
    same matrix. Zero entries in the adjacency lines are padding and skipped.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = [ln.split() for ln in text.splitlines()]
    # empty lines inside the body are zero-degree columns or rows
    while lines and not lines[-1]:
        lines.pop()
    try:
        ints = [[int(tok) for tok in ln] for ln in lines]
    except ValueError as exc:
        raise ParityFormatError(f"non-integer token in alist: {exc}") from None
    if len(ints) < 4 or len(ints[0]) != 2 or len(ints[1]) != 2:
        raise ParityFormatError("alist header must be 'n m' then 'max_col max_row'")
    n, m = ints[0]
    max_col, max_row = ints[1]
    if n <= 0 or m <= 0:
        raise ParityFormatError(f"bad dimensions n={n} m={m}")
    col_deg, row_deg = ints[2], ints[3]
    if len(col_deg) != n or len(row_deg) != m:
        raise ParityFormatError("degree lines do not match header dimensions")
    if len(ints) != 4 + n + m:
        raise ParityFormatError(f"expected {n} column lines and {m} row lines, got {len(ints) - 4} lines")
    if max(col_deg) != max_col or max(row_deg) != max_row:
        raise ParityFormatError("maximum degrees in header disagree with degree lists")

    from_cols = np.zeros((m, n), dtype=np.uint8)
    for j, line in enumerate(ints[4 : 4 + n]):
        idx = [v for v in line if v != 0]
        if len(idx) != col_deg[j]:
            raise ParityFormatError(f"column {j + 1}: degree {col_deg[j]} but {len(idx)} entries")
        for i in idx:
            if not 1 <= i <= m:
                raise ParityFormatError(f"column {j + 1}: row index {i} outside 1..{m}")
            from_cols[i - 1, j] = 1
        if len(set(idx)) != len(idx):
            raise ParityFormatError(f"column {j + 1}: repeated row index")

    from_rows = np.zeros((m, n), dtype=np.uint8)
    for i, line in enumerate(ints[4 + n :]):
        idx = [v for v in line if v != 0]
        if len(idx) != row_deg[i]:
            raise ParityFormatError(f"row {i + 1}: degree {row_deg[i]} but {len(idx)} entries")
        for j in idx:
            if not 1 <= j <= n:
                raise ParityFormatError(f"row {i + 1}: column index {j} outside 1..{n}")
            from_rows[i, j - 1] = 1
        if len(set(idx)) != len(idx):
            raise ParityFormatError(f"row {i + 1}: repeated column index")

    if not np.array_equal(from_cols, from_rows):
        raise ParityFormatError("column and row sections of the alist disagree")
    return ParityMatrix.from_dense(from_cols, strict_degree=strict_degree)


def serialize_alist(h: ParityMatrix) -> bytes:
    """Canonical alist text: no padding, ascending indices, LF line endings."""
    col_deg = [len(a) for a in h.col_adj]
    row_deg = [len(a) for a in h.row_adj]
    out = [
        f"{h.n} {h.m}",
        f"{max(col_deg)} {max(row_deg)}",
        " ".join(map(str, col_deg)),
        " ".join(map(str, row_deg)),
    ]
    out.extend(" ".join(str(int(i) + 1) for i in a) for a in h.col_adj)
    out.extend(" ".join(str(int(j) + 1) for j in a) for a in h.row_adj)
    return ("\n".join(out) + "\n").encode("ascii")


# -- quasi-cyclic ------------------------------------------------------------


@dataclass(frozen=True)
class QcSpec:
    """Block layout of a quasi-cyclic parity matrix.

    ``shifts[a][b]`` is a tuple of cyclic offsets for block ``(a, b)``; an empty
    tuple is an all-zero block. Offset ``s`` places ones at
    ``(r, (r + s) mod Z)`` within the block.
    """

    row_blocks: int
    col_blocks: int
    block_size: int
    shifts: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.row_blocks < 1 or self.col_blocks < 1 or self.block_size < 1:
            raise ParityFormatError("QC dimensions must be positive")
        if len(self.shifts) != self.row_blocks or any(len(r) != self.col_blocks for r in self.shifts):
            raise ParityFormatError("shift table does not match block dimensions")
        for a, row in enumerate(self.shifts):
            for b, cell in enumerate(row):
                if len(set(cell)) != len(cell):
                    raise ParityFormatError(f"block ({a}, {b}): duplicate shift offsets {list(cell)}")
                for s in cell:
                    if not 0 <= s < self.block_size:
                        raise ParityFormatError(f"block ({a}, {b}): shift {s} outside [0, {self.block_size})")

    @property
    def weight(self) -> int:
        """Number of ones in the expanded matrix."""
        return self.block_size * sum(len(cell) for row in self.shifts for cell in row)


def expand_qc(spec: QcSpec, *, strict_degree: bool = True) -> ParityMatrix:
    z = spec.block_size
    dense = np.zeros((spec.row_blocks * z, spec.col_blocks * z), dtype=np.uint8)
    r = np.arange(z)
    for a, row in enumerate(spec.shifts):
        for b, cell in enumerate(row):
            for s in cell:
                dense[a * z + r, b * z + (r + s) % z] = 1
    return ParityMatrix.from_dense(dense, strict_degree=strict_degree)


def parse_qc(text: bytes | str) -> QcSpec:
    """Parse the plain-text QC layout: ``rowBlocks colBlocks Z`` then one line per block row."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 3:
        raise ParityFormatError("QC header must be 'rowBlocks colBlocks Z'")
    try:
        rb, cb, z = (int(t) for t in lines[0])
    except ValueError:
        raise ParityFormatError("QC header must be integers") from None
    if len(lines) - 1 != rb:
        raise ParityFormatError(f"expected {rb} block rows, got {len(lines) - 1}")
    table = []
    for a, cells in enumerate(lines[1:]):
        if len(cells) != cb:
            raise ParityFormatError(f"block row {a}: expected {cb} cells, got {len(cells)}")
        row = []
        for cell in cells:
            if cell == "-":
                row.append(())
                continue
            try:
                row.append(tuple(int(t) for t in cell.split(",")))
            except ValueError:
                raise ParityFormatError(f"block row {a}: bad cell {cell!r}") from None
        table.append(tuple(row))
    return QcSpec(rb, cb, z, tuple(table))


def serialize_qc(spec: QcSpec) -> bytes:
    out = [f"{spec.row_blocks} {spec.col_blocks} {spec.block_size}"]
    for row in spec.shifts:
        out.append(" ".join(",".join(map(str, cell)) if cell else "-" for cell in row))
    return ("\n".join(out) + "\n").encode("ascii")


def random_qc_spec(
    row_blocks: int = 2,
    col_blocks: int = 16,
    block_size: int = 511,
    shifts_per_block: int = 2,
    seed: int = 0,
    max_tries: int = 200,
) -> QcSpec:
    """Draw a QC layout with every block holding ``shifts_per_block`` circulants.

    Offsets are drawn so that the expanded matrix has no length-4 cycle
    (no two rows share more than one column), when such a draw is found within
    ``max_tries`` attempts per block.
    """
    rng = np.random.default_rng(seed)
    z = block_size
    table: list[list[tuple[int, ...]]] = [[() for _ in range(col_blocks)] for _ in range(row_blocks)]
    # differences (mod z) already used between each ordered pair of block-rows
    used: dict[tuple[int, int], set[int]] = {}
    for b in range(col_blocks):
        for attempt in range(max_tries):
            column = [tuple(sorted(int(v) for v in rng.choice(z, size=shifts_per_block, replace=False)))
                      for _ in range(row_blocks)]
            diffs = _block_column_differences(column, z)
            clash = any(
                len(d) != len(set(d)) or used.get(key, set()) & set(d) for key, d in diffs.items()
            )
            if not clash or attempt == max_tries - 1:
                break
        for key, d in diffs.items():
            used.setdefault(key, set()).update(d)
        for a in range(row_blocks):
            table[a][b] = column[a]
    return QcSpec(row_blocks, col_blocks, z, tuple(tuple(r) for r in table))


def _block_column_differences(column: Sequence[tuple[int, ...]], z: int) -> dict[tuple[int, int], list[int]]:
    # Rows x (block a) and y (block c) both touch a column of this block column
    # iff y - x = s - t (mod z) for some s in column[a], t in column[c].
    # Two rows sharing two columns means one difference repeats.
    out: dict[tuple[int, int], list[int]] = {}
    for a, sa in enumerate(column):
        for c, sc in enumerate(column):
            if c < a:
                continue
            if c == a:
                d = [(s - t) % z for s in sa for t in sa if s != t]
            else:
                d = [(s - t) % z for s in sa for t in sc]
            out[(a, c)] = d
    return out


# -- GF(2) -------------------------------------------------------------------


def syndrome(h: ParityMatrix, bits) -> np.ndarray:
    """Return ``H @ bits mod 2`` as a ``uint8`` vector of length m."""
    b = np.asarray(bits)
    if b.shape != (h.n,):
        raise ValueError(f"bit vector has shape {b.shape}, expected ({h.n},)")
    b = b.astype(np.uint8, copy=False) & 1
    return np.fromiter(
        (int(np.bitwise_xor.reduce(b[adj])) if len(adj) else 0 for adj in h.row_adj),
        dtype=np.uint8,
        count=h.m,
    )


def is_codeword(h: ParityMatrix, bits) -> bool:
    return not syndrome(h, bits).any()
