"""Pure numpy versions of the dense decoder kernels.

Used when the compiled extension is unavailable. Same signatures and the same
bit-level results as the compiled kernels.
"""

import numpy as np


def masked_fan_out(H, v, lam):
    np.multiply(H, v, out=lam, casting="unsafe")
    # v * 0 is -0.0 for negative v; off-mask entries must be +0.0
    lam += 0.0


def matrix_minus(lam, eta):
    np.subtract(lam, eta, out=lam)


def find_minima(H, lam, min0, min1, loc):
    mag = np.abs(lam)
    mag[H == 0] = np.inf
    rows = np.arange(H.shape[0])
    # argmin returns the first occurrence, i.e. the smallest column on ties
    np.argmin(mag, axis=1, out=loc)
    min0[:] = mag[rows, loc]
    mag[rows, loc] = np.inf
    np.min(mag, axis=1, out=min1)


def sign_reduce(H, lam, sgn):
    negatives = np.count_nonzero((lam < 0.0) & (H != 0), axis=1)
    sgn[:] = np.where(negatives & 1, -1.0, 1.0)


def produce_new_matrix(H, lam, min0, min1, loc, sgn, eta):
    m = H.shape[0]
    mag = np.broadcast_to(min0[:, None], H.shape).copy()
    mag[np.arange(m), loc] = min1
    signed = np.where(lam < 0.0, -sgn[:, None], sgn[:, None]) * mag
    np.copyto(eta, np.where(H != 0, signed, 0.0))


def sum_vertical(eta, acc):
    acc[:] = 0.0
    for row in eta:
        acc += row


def add_channel(acc, r, s):
    np.add(acc, r, out=s)


def slicer(s, b):
    np.greater(s, 0.0, out=b, casting="unsafe")


def syndrome_product(col_ptr, col_rows, b, counts):
    counts[:] = 0
    cols = np.flatnonzero(b)
    if cols.size:
        starts, stops = col_ptr[cols], col_ptr[cols + 1]
        idx = np.concatenate([col_rows[a:z] for a, z in zip(starts, stops)])
        np.add.at(counts, idx, 1)


def mod2(counts):
    np.bitwise_and(counts, 1, out=counts)


def is_codeword_check(counts):
    return not counts.any()
