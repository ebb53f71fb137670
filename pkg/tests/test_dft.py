import time

import numpy as np
import pytest

from core.circulant import batch_smallest_singular_values
from core.dft import dft_forward, dft_inverse, fft_bluestein, fft_radix2, fourier_matrix
from core.errors import SizeError


def naive_dft(v):
    n = v.size
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n) @ v


def random_vector(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


@pytest.mark.parametrize('n', list(range(1, 65)) + [127, 128, 251, 1000])
def test_matches_naive_sum(n):
    v = random_vector(n, n)
    expected = naive_dft(v)
    got = dft_forward(v)
    assert np.max(np.abs(got - expected)) <= 1e-10 * max(1.0, np.max(np.abs(expected)))


@pytest.mark.parametrize('n', [1, 2, 3, 17, 64, 100, 255, 1024])
def test_inverse_round_trip(n):
    v = random_vector(n, 2 * n + 1)
    assert np.allclose(dft_inverse(dft_forward(v)), v, atol=1e-12)


def test_positive_exponent_convention():
    # out[k] is the polynomial with coefficients v evaluated at omega^k
    v = np.array([0.0, 1.0, 0.0, 0.0, 0.0])
    assert np.allclose(dft_forward(v), np.exp(2j * np.pi * np.arange(5) / 5))


def test_batched_rows():
    rows = np.stack([random_vector(12, s) for s in range(4)])
    out = dft_forward(rows)
    for row, transformed in zip(rows, out):
        assert np.allclose(transformed, naive_dft(row))


def test_bluestein_agrees_with_radix2_on_powers_of_two():
    v = random_vector(64, 7)
    assert np.allclose(fft_bluestein(v), fft_radix2(v))


def test_radix2_rejects_other_lengths():
    with pytest.raises(ValueError):
        fft_radix2(np.ones(12))


@pytest.mark.parametrize('n', [1, 2, 7, 16, 33])
def test_fourier_matrix_is_unitary(n):
    f = fourier_matrix(n)
    assert np.allclose(f.conj().T @ f, np.eye(n), atol=1e-12)
    assert np.allclose(f, f.T)


def test_fourier_matrix_cap():
    with pytest.raises(SizeError):
        fourier_matrix(4096)


@pytest.mark.slow
def test_large_power_of_two_is_fast():
    row = np.where(np.random.default_rng(3).random(1 << 16) < 0.5, -1.0, 1.0)
    start = time.perf_counter()
    batch_smallest_singular_values(row)
    assert time.perf_counter() - start < 1.0
