import math

import numpy as np
import pytest

from core.coeff_dist import CoeffDistribution, DistKind
from core.errors import InputError, NoRootsError
from core.polynomial import RandomPoly, WeightFn, build_poly
from core.roots import (
    annulus_stats,
    default_widths,
    find_roots,
    kac_expected_real_roots,
    ks_uniform,
)


def unity(d):
    coeffs = np.zeros(d + 1)
    coeffs[0], coeffs[d] = -1.0, 1.0
    return coeffs


@pytest.mark.parametrize('d', [2, 3, 5, 8, 16, 31, 64, 100, 128, 256])
def test_roots_of_unity(d):
    rs = find_roots(unity(d))
    assert rs.converged
    exact = np.exp(2j * np.pi * np.arange(d) / d)
    gaps = np.min(np.abs(exact[:, None] - rs.roots[None, :]), axis=1)
    assert gaps.max() < 1e-12


@pytest.mark.parametrize('seed', range(100))
def test_vieta(seed):
    n = 3 + seed % 62
    p = build_poly(CoeffDistribution(DistKind.GAUSSIAN), WeightFn.parse('const'), n, 1000 + seed)
    c = p.coeffs
    rs = find_roots(p)
    assert rs.converged
    assert rs.roots.size == n - 1
    expected_sum = -c[-2] / c[-1]
    assert abs(rs.roots.sum() - expected_sum) <= 1e-8 * max(1.0, np.sum(np.abs(rs.roots)))
    expected_prod = (-1) ** (n - 1) * c[0] / c[-1]
    assert abs(np.prod(rs.roots) - expected_prod) <= 1e-8 * max(1.0, abs(expected_prod))


def test_zero_roots_are_explicit():
    rs = find_roots([0.0, 0.0, -4.0, 0.0, 1.0])
    assert rs.zero_roots == 2
    assert np.count_nonzero(rs.roots == 0) == 2
    assert np.allclose(np.sort(np.abs(rs.roots[rs.roots != 0])), [2.0, 2.0])


def test_linear_polynomial():
    rs = find_roots(RandomPoly.from_coeffs([3.0, 2.0]))
    assert rs.roots[0] == pytest.approx(-1.5)


def test_degree_zero_has_no_roots():
    with pytest.raises(NoRootsError):
        find_roots([5.0])
    with pytest.raises(NoRootsError):
        find_roots([0.0, 0.0])


def test_non_finite_input():
    with pytest.raises(InputError):
        find_roots([1.0, math.nan, 1.0])


def test_ks_uniform_equally_spaced():
    m = 40
    args = 2 * np.pi * (np.arange(m) + 0.5) / m
    assert ks_uniform(args) == pytest.approx(1 / (2 * m))


def test_annulus_stats_roots_of_unity():
    rs = find_roots(unity(8))
    stats = annulus_stats(rs, 9)
    assert all(frac == 1.0 for frac in stats.frac_within.values())
    assert stats.min_scaled_dist < 1e-10
    assert stats.real_roots == 2
    assert list(stats.frac_within) == sorted(default_widths(9))


def test_annulus_stats_rejects_unconverged():
    rs = find_roots(unity(64), max_iter=1)
    assert not rs.converged
    with pytest.raises(InputError):
        annulus_stats(rs, 65)


def test_default_widths_scale_with_n():
    widths = default_widths(100)
    assert widths[0] == pytest.approx(1e-4)
    assert 0.1 in widths and 0.01 in widths


def test_kac_degree_one():
    assert kac_expected_real_roots(1) == pytest.approx(1.0, abs=1e-4)
    assert kac_expected_real_roots(0) == 0.0


def test_kac_grows_logarithmically():
    small, large = kac_expected_real_roots(10), kac_expected_real_roots(100)
    assert small < large
    assert large == pytest.approx(2 / math.pi * math.log(100) + 0.6257, abs=0.15)
