import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrminsum import bit_node_update, check_node_update, decode_ref, is_codeword, modulate, slice_hard

from conftest import random_frame, random_parity


def test_check_node_three_inputs():
    # position 0 sees (2.0, -1.0): min 1.0, one negative -> -1.0
    # position 1 sees (-0.5, -1.0): min 0.5, two negatives -> +0.5
    # position 2 sees (-0.5, 2.0): min 0.5, one negative -> -0.5
    assert check_node_update([-0.5, 2.0, -1.0]) == [-1.0, 0.5, -0.5]


@pytest.mark.parametrize("a,b", [(0.3, -1.2), (-2.0, -0.1), (5.0, 5.0)])
def test_check_node_degree_two_swaps(a, b):
    assert check_node_update([a, b]) == [b, a]


def test_check_node_sign_of_zero_is_positive():
    out = check_node_update([0.0, 3.0])
    assert out == [3.0, 0.0]
    assert check_node_update([0.0, -3.0, 1.0]) == [-1.0, 0.0, -0.0]


def test_check_node_rejects_degree_one():
    with pytest.raises(ValueError):
        check_node_update([1.0])


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-10, 10, allow_nan=False), min_size=2, max_size=8),
    st.integers(0, 7),
    st.floats(-10, 10, allow_nan=False),
)
def test_check_node_excludes_self(inputs, j, new_value):
    j %= len(inputs)
    before = check_node_update(inputs)[j]
    perturbed = list(inputs)
    perturbed[j] = new_value
    assert check_node_update(perturbed)[j] == before


def test_bit_node_update():
    assert bit_node_update(0.2, [0.5, -0.1]) == pytest.approx(0.6)
    assert bit_node_update(0.2, []) == 0.2


def test_slice():
    assert slice_hard([0.5, -0.3, 0.0]).tolist() == [1, 0, 0]
    assert slice_hard([-1.0, -2.0]).tolist() == [0, 0]
    s = np.array([0.2, -0.0, 3.0, -1e-300])
    assert np.array_equal(slice_hard(7.5 * s), slice_hard(s))


def test_noiseless_short_circuit(example_h):
    out = decode_ref(example_h, modulate(np.zeros(10)))
    assert (out.is_codeword, out.iterations) == (True, 0)
    assert out.hard.tolist() == [0] * 10


def test_flips_single_bit(example_h):
    r = -np.ones(10)
    r[2] = 0.4
    assert not is_codeword(example_h, slice_hard(r))
    out = decode_ref(example_h, r, 50)
    codewords = {v for v in itertools.product((0, 1), repeat=10) if is_codeword(example_h, np.array(v))}
    assert tuple(out.hard.tolist()) in codewords
    assert out.is_codeword and 1 <= out.iterations <= 50
    assert out.hard.tolist() == [0] * 10


def test_zero_iterations(example_h):
    r = -np.ones(10)
    r[2] = 0.4
    out = decode_ref(example_h, r, 0)
    assert (out.is_codeword, out.iterations) == (False, 0)
    assert np.array_equal(out.hard, slice_hard(r))


def test_dimension_mismatch(example_h):
    with pytest.raises(ValueError):
        decode_ref(example_h, np.zeros(9))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.25, 2.0, 1024.0]))
def test_scale_equivariance_exact_for_powers_of_two(seed, c):
    # power-of-two scaling commutes with every rounding step, so equality is exact
    rng = np.random.default_rng(seed)
    h = random_parity(rng)
    r = random_frame(rng, h.n)
    t1, tc = [], []
    a = decode_ref(h, r, 30, trace=t1)
    b = decode_ref(h, c * r, 30, trace=tc)
    assert (a.is_codeword, a.iterations) == (b.is_codeword, b.iterations)
    assert np.array_equal(a.hard, b.hard)
    assert len(t1) == len(tc)
    for x, y in zip(t1, tc):
        assert np.array_equal(y, c * x)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 20), st.integers(1, 4))
def test_termination_contract(seed, max_iters, check_every):
    rng = np.random.default_rng(seed)
    h = random_parity(rng)
    out = decode_ref(h, random_frame(rng, h.n), max_iters, check_every)
    if out.is_codeword:
        assert is_codeword(h, out.hard)
        assert out.iterations <= max_iters
    else:
        assert out.iterations == max_iters
