import math

import numpy as np
import pytest

from core.errors import ParameterError, RangeError
from core.lcd import (
    column_step,
    dist_to_lattice,
    divisor_count,
    divisors,
    factorize,
    gcd_class_counts,
    gcd_threshold_count,
    lcd_search,
    totient,
    totient_gap_failures,
    vk,
)


PRIMES_TO_100 = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]


@pytest.mark.parametrize('n, k', [(1, 0), (5, 5), (5, -1)])
def test_vk_range(n, k):
    with pytest.raises(RangeError):
        vk(n, k)


def test_vk_gives_eigenvalue_parts():
    n, k = 7, 3
    x = np.random.default_rng(0).standard_normal(n)
    eig = np.sum(x * np.exp(2j * np.pi * k * np.arange(n) / n))
    assert np.allclose(vk(n, k).apply(x), [eig.real, eig.imag])


@pytest.mark.parametrize('n', [31, 61, 127])
def test_norm_identity(n):
    theta = np.random.default_rng(n).standard_normal(2)
    image = vk(n, 1).apply_transpose(theta)
    assert np.sum(image ** 2) == pytest.approx(n * np.sum(theta ** 2) / 2, rel=1e-9)


def test_dist_to_lattice():
    assert dist_to_lattice([0.25, 1.0, -2.5]) == pytest.approx(math.sqrt(0.0625 + 0.25))
    assert np.allclose(dist_to_lattice([[0.1, 0.1], [3.0, 4.0]]), [math.sqrt(0.02), 0.0])


def test_lcd_trivial_frequency():
    cert = lcd_search(vk(8, 0), n_t=256, n_alpha=256)
    assert cert.violated
    assert 0.5 <= cert.certified_lower_bound <= 1.0


@pytest.mark.parametrize('n', [31, 61])
def test_lcd_bound_is_in_range(n):
    cert = lcd_search(vk(n, 1), n_t=128, n_alpha=256, workers=2)
    assert 0.5 <= cert.certified_lower_bound <= 10.0
    assert cert.grid == (128, 256)


def test_lcd_small_prime_is_violated_below_t_max():
    # при t <= 0.55 расстояние до решетки не меньше sqrt(15.5 t^2 - 3.1) и выше порога,
    # к t = 2 среднее dist^2 около 31/12 против порога 4 ln(2 sqrt(15.5) / 2)
    cert = lcd_search(vk(31, 1), L=2.0, t_min=0.5, t_max=3.1, n_t=256, n_alpha=512)
    assert cert.violated
    assert 0.55 < cert.certified_lower_bound <= 2.0
    assert cert.min_ratio < 1.0


def test_lcd_workers_do_not_change_result():
    one = lcd_search(vk(16, 3), n_t=128, n_alpha=128, workers=1)
    four = lcd_search(vk(16, 3), n_t=128, n_alpha=128, workers=4)
    assert one == four


def test_lcd_certificate_json():
    data = lcd_search(vk(8, 0), n_t=64, n_alpha=64).to_json()
    assert set(data) == {'n', 'k', 'L', 't_range', 'grid', 'min_ratio', 'certified_lower_bound'}
    assert data['t_range'] == [0.5, 10.0]


@pytest.mark.parametrize('kwargs', [dict(t_min=0.0), dict(t_min=2.0, t_max=1.0), dict(n_t=10), dict(L=0.0)])
def test_lcd_rejects_parameters(kwargs):
    with pytest.raises(ParameterError):
        lcd_search(vk(8, 1), **kwargs)


def test_factorize():
    assert factorize(1) == {}
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(999_983) == {999_983: 1}
    with pytest.raises(RangeError):
        factorize(0)
    with pytest.raises(RangeError):
        factorize(10 ** 12 + 1)


def test_totient_divisor_sum():
    for n in range(1, 2001):
        assert sum(totient(n // d) for d in divisors(n)) == n


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisor_count(12) == 6
    assert divisor_count(1) == 1


@pytest.mark.parametrize('n', [1, 2, 12, 97, 360, 1024, 1999, 2000])
def test_gcd_class_counts_brute_force(n):
    counts = gcd_class_counts(n)
    brute = {}
    for k in range(n):
        d = math.gcd(k, n)
        brute[d] = brute.get(d, 0) + 1
    assert counts == brute


def test_gcd_threshold_count():
    assert gcd_threshold_count(12, 0.5) == (4, 6)
    with pytest.raises(RangeError):
        gcd_threshold_count(12, 1.0)


@pytest.mark.parametrize('nu', [0.3, 0.5, 0.9])
def test_gcd_threshold_never_exceeds_bound(nu):
    for n in range(1, 2001):
        exact, bound = gcd_threshold_count(n, nu)
        assert 0 <= exact <= bound <= n


def test_totient_gap_failures():
    assert totient_gap_failures(100) == [1] + PRIMES_TO_100


def test_column_step():
    n, k = 64, 5
    alphas = np.linspace(0, np.pi, 64, endpoint=False)
    assert column_step(n, k, alphas) <= 2 * math.pi * k / n
