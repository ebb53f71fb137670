import math

import numpy as np
import pytest

from core.circulant import (
    Circulant,
    GCirculant,
    batch_smallest_singular_values,
    dense_eig_oracle,
    dense_svd_oracle,
    densify,
    eigenvalues,
    extreme_singular_values,
    faddeev_leverrier,
    gcirc_spectral,
    lu_determinant,
    matrix_to_csv,
    q_factor,
)
from core.dft import fourier_matrix
from core.errors import InputError, ParameterError, SizeError, UnsupportedError


def gaussian_row(n, seed):
    return np.random.default_rng(seed).standard_normal(n)


def rademacher_row(n, seed):
    return np.where(np.random.default_rng(seed).random(n) < 0.5, -1.0, 1.0)


def test_identity_row():
    summary = extreme_singular_values(Circulant([1.0, 0.0, 0.0, 0.0]))
    assert summary.s_min == 1.0 and summary.s_max == 1.0
    assert not summary.numerically_singular


def test_singular_row():
    summary = extreme_singular_values(Circulant([1.0, 1.0]))
    assert summary.s_min == 0.0
    assert summary.s_max == 2.0
    assert summary.argmin == 1
    assert summary.numerically_singular


def test_densify_layout():
    m = densify(Circulant(np.array([1, 2, 3])))
    assert m.tolist() == [[1, 2, 3], [3, 1, 2], [2, 3, 1]]
    g = densify(GCirculant(np.array([1, 2, 3, 4]), 2))
    assert g.tolist() == [[1, 2, 3, 4], [3, 4, 1, 2], [1, 2, 3, 4], [3, 4, 1, 2]]


@pytest.mark.parametrize('seed', range(50))
def test_fourier_diagonalization(seed):
    n = 1 + seed * 63 // 49
    c = Circulant(gaussian_row(n, seed))
    f = fourier_matrix(n)
    # eigenvalues use the positive exponent, so circ(c) = F D F*
    rebuilt = f @ np.diag(eigenvalues(c)) @ f.conj().T
    assert np.max(np.abs(rebuilt - densify(c))) <= 1e-10 * np.sum(np.abs(c.first_row))


@pytest.mark.parametrize('n', range(2, 33))
def test_smin_matches_jacobi_oracle(n):
    for seed in range(10):
        for row in (gaussian_row(n, seed), rademacher_row(n, seed)):
            fast = extreme_singular_values(Circulant(row)).s_min
            oracle = dense_svd_oracle(densify(Circulant(row)))[-1]
            assert abs(fast - oracle) <= max(1e-9 * max(fast, oracle), 1e-12)


@pytest.mark.slow
@pytest.mark.parametrize('n', range(2, 33))
def test_smin_matches_jacobi_oracle_full(n):
    for seed in range(200):
        row = gaussian_row(n, 10_000 + seed)
        fast = extreme_singular_values(Circulant(row)).s_min
        oracle = dense_svd_oracle(densify(Circulant(row)))[-1]
        assert abs(fast - oracle) <= max(1e-9 * max(fast, oracle), 1e-12)


def test_jacobi_against_known_values():
    m = np.diag([3.0, 1.0, 2.0])
    assert np.allclose(dense_svd_oracle(m), [3.0, 2.0, 1.0])
    rect = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    assert np.allclose(dense_svd_oracle(rect), [math.sqrt(3.0), 1.0])
    with pytest.raises(SizeError):
        dense_svd_oracle(np.eye(65))


def test_batch_smallest_singular_values():
    rows = np.stack([gaussian_row(16, s) for s in range(5)])
    batch = batch_smallest_singular_values(rows)
    single = [extreme_singular_values(Circulant(r)).s_min for r in rows]
    assert np.allclose(batch, single)


def test_determinant_is_eigenvalue_product():
    c = Circulant(gaussian_row(9, 4))
    det = lu_determinant(densify(c))
    expected = np.prod(eigenvalues(c))
    assert abs(det - expected) <= 1e-9 * abs(expected)
    assert lu_determinant(np.zeros((3, 3))) == 0


@pytest.mark.parametrize('n', [3, 5, 8])
def test_eig_oracle_matches_dft(n):
    c = Circulant(gaussian_row(n, 40 + n))
    oracle = dense_eig_oracle(densify(c))
    expected = eigenvalues(c)
    gaps = np.min(np.abs(expected[:, None] - oracle[None, :]), axis=1)
    assert gaps.max() < 1e-6


def test_faddeev_leverrier_diagonal():
    coeffs = faddeev_leverrier(np.diag([1.0, 2.0]))
    assert np.allclose(coeffs, [2.0, -3.0, 1.0])


@pytest.mark.parametrize('n', range(1, 65))
def test_q_factor(n):
    row = np.random.default_rng(n).integers(-9, 10, n)
    for g in range(1, n + 1):
        q = q_factor(n, g)
        assert np.array_equal(q @ densify(Circulant(row)), densify(GCirculant(row, g)))
        unitary = np.array_equal(q @ q.T, np.eye(n, dtype=q.dtype))
        assert unitary == (math.gcd(n, g) == 1)


@pytest.mark.parametrize('n', [5, 12, 17, 32])
def test_coprime_g_keeps_singular_values(n):
    row = gaussian_row(n, 77)
    base = np.sort(dense_svd_oracle(densify(Circulant(row))))
    for g in range(1, n):
        if math.gcd(n, g) != 1:
            continue
        values = np.sort(dense_svd_oracle(densify(GCirculant(row, g))))
        assert np.allclose(values, base, rtol=1e-9, atol=1e-12)


def test_gcirc_coprime_uses_fft():
    row = gaussian_row(32, 1)
    summary = gcirc_spectral(GCirculant(row, 5))
    base = extreme_singular_values(Circulant(row))
    assert summary.s_min == base.s_min and summary.s_max == base.s_max


def test_gcirc_non_coprime_is_singular():
    summary = gcirc_spectral(GCirculant(gaussian_row(12, 3), 4))
    assert summary.numerically_singular or summary.s_min <= 1e-10 * summary.s_max
    assert summary.singular_values.size == 12
    assert summary.eigenvalues.size == 12


def test_gcirc_non_coprime_cap():
    with pytest.raises(UnsupportedError):
        gcirc_spectral(GCirculant(gaussian_row(100, 0), 10))


def test_g_is_reduced_mod_n():
    assert GCirculant(np.ones(6), 7).g == 1
    assert GCirculant(np.ones(6), 6).g == 6


def test_rows_must_be_finite():
    with pytest.raises(InputError):
        Circulant([1.0, np.nan])
    with pytest.raises(InputError):
        GCirculant([np.inf, 1.0, 2.0], 2)
    with pytest.raises(ParameterError):
        GCirculant([1.0, 2.0], 0)


def test_matrix_to_csv():
    text = matrix_to_csv(densify(Circulant([1.0, 2.0])))
    assert text.splitlines() == ['1+0j,2+0j', '2+0j,1+0j']
