import math

import numpy as np
import pytest

from mrminsum import ChannelConfig, add_awgn, decode_mr, modulate, raw_ber, slice_hard
from mrminsum.channel import noise_sigma

RATE = 7154 / 8176


def q_function(x):
    return 0.5 * math.erfc(x / math.sqrt(2))


def test_modulate():
    assert modulate([0, 1, 0]).tolist() == [-1.0, 1.0, -1.0]
    assert modulate(np.zeros(4)).tolist() == [-1.0] * 4


def test_modulate_then_slice():
    b = np.random.default_rng(0).integers(0, 2, 100)
    assert np.array_equal(slice_hard(modulate(b)), b)


@pytest.mark.parametrize(
    "convention,expected",
    [
        ("ebn0", 1.0 / (2.0 * RATE * 10**0.3)),
        ("esn0", 1.0 / (2.0 * 10**0.3)),
    ],
)
def test_sigma_formula(convention, expected):
    assert noise_sigma(3.0, RATE, convention) ** 2 == pytest.approx(expected, rel=1e-15)


def test_config_validation():
    with pytest.raises(ValueError):
        ChannelConfig(float("nan"), 0.5)
    with pytest.raises(ValueError):
        ChannelConfig(3.0, 1.0)
    with pytest.raises(ValueError):
        ChannelConfig(3.0, 0.5, convention="snr")


def test_deterministic():
    cfg = ChannelConfig(3.0, RATE, seed=123)
    x = modulate(np.zeros(1000))
    assert add_awgn(x, cfg, 4).tobytes() == add_awgn(x, cfg, 4).tobytes()
    assert add_awgn(x, cfg, 4).tobytes() != add_awgn(x, cfg, 5).tobytes()
    assert add_awgn(x, cfg, 4).tobytes() != add_awgn(x, ChannelConfig(3.0, RATE, seed=124), 4).tobytes()


def test_high_snr_is_noiseless(example_h):
    cfg = ChannelConfig(200.0, 0.5, seed=1)
    y = add_awgn(modulate(np.zeros(10)), cfg)
    assert np.allclose(y, -1.0, atol=1e-8)
    out = decode_mr(example_h, y)
    assert (out.is_codeword, out.iterations) == (True, 0)


@pytest.mark.parametrize("convention", ["ebn0", "esn0"])
def test_noise_variance_and_mean(convention):
    cfg = ChannelConfig(3.0, RATE, seed=99, convention=convention)
    n = 10**6
    noise = add_awgn(np.zeros(n), cfg)
    var = cfg.sigma**2
    assert abs(noise.var() / var - 1.0) < 0.01
    assert abs(noise.mean()) < 5 * cfg.sigma / math.sqrt(n)


def test_raw_ber_edges():
    b = np.array([0, 1, 1, 0])
    assert raw_ber(modulate(b), b) == 0.0
    assert raw_ber(-modulate(b), b) == 1.0
    with pytest.raises(ValueError):
        raw_ber(np.zeros(3), b)


@pytest.mark.parametrize(
    "convention,arg",
    [("ebn0", math.sqrt(2 * RATE * 10**0.3)), ("esn0", math.sqrt(2 * 10**0.3))],
)
def test_raw_ber_matches_gaussian_tail(convention, arg):
    n = 10**5
    cfg = ChannelConfig(3.0, RATE, seed=2024, convention=convention)
    zero = np.zeros(n, dtype=np.uint8)
    measured = raw_ber(add_awgn(modulate(zero), cfg), zero)
    p = q_function(arg)
    assert abs(measured - p) < 3 * math.sqrt(p * (1 - p) / n)
