import math

import numpy as np
import pytest

from core.coeff_dist import (
    CoeffDistribution,
    DistKind,
    TailFit,
    abs_mean,
    anticoncentration_params,
    concentration,
    empirical_mgf,
    exp_tail_fit,
    local_subgaussian_gamma,
    log_mgf,
    mgf,
    sample,
    sample_many,
)
from core.errors import DomainError, ParameterError
from core.rng import RngState


@pytest.mark.parametrize('spec, variance', [
    ('rademacher', 1.0),
    ('gaussian', 1.0),
    ('uniform:a=2', 4.0 / 3.0),
    ('laplace:b=0.5', 0.5),
])
def test_variance_and_mean(spec, variance):
    dist = CoeffDistribution.parse(spec)
    assert dist.mean == 0.0
    assert dist.variance == pytest.approx(variance)


def test_mgf_radius():
    assert CoeffDistribution.parse('laplace:b=2').mgf_radius == 0.5
    assert math.isinf(CoeffDistribution.parse('uniform:a=3').mgf_radius)


@pytest.mark.parametrize('spec', ['cauchy', 'uniform:a=-1', 'uniform:b=1', 'rademacher:a=1', 'laplace:b=x'])
def test_parse_rejects(spec):
    with pytest.raises(ParameterError):
        CoeffDistribution.parse(spec)


def test_spec_round_trip():
    for spec in ('rademacher', 'gaussian', 'uniform:a=1.5', 'laplace:b=2'):
        assert CoeffDistribution.parse(spec).spec == spec


def test_samples_are_reproducible_and_supported():
    rad = sample_many(CoeffDistribution(DistKind.RADEMACHER), 11, 5000)
    assert set(np.unique(rad)) == {-1.0, 1.0}
    assert np.array_equal(rad, sample_many(CoeffDistribution(DistKind.RADEMACHER), 11, 5000))
    uni = sample_many(CoeffDistribution(DistKind.UNIFORM, 2.0), 3, 5000)
    assert np.all(np.abs(uni) < 2.0)


@pytest.mark.parametrize('spec', ['gaussian', 'uniform:a=1', 'laplace:b=1'])
def test_sample_moments(spec):
    dist = CoeffDistribution.parse(spec)
    values = sample_many(dist, 2024, 200_000)
    assert abs(values.mean()) < 0.02
    assert values.var() == pytest.approx(dist.variance, rel=0.03)


def test_sample_advances_counter():
    state = RngState(5, stream=1)
    sample(CoeffDistribution(DistKind.GAUSSIAN), state)
    assert state.counter == 2
    sample(CoeffDistribution(DistKind.LAPLACE), state)
    assert state.counter == 3


def test_mgf_closed_forms():
    assert mgf(CoeffDistribution(DistKind.GAUSSIAN), 0.7) == pytest.approx(math.exp(0.245))
    assert mgf(CoeffDistribution(DistKind.RADEMACHER), 1.2) == pytest.approx(math.cosh(1.2))
    assert mgf(CoeffDistribution(DistKind.UNIFORM, 2.0), 0.5) == pytest.approx(math.sinh(1.0))
    assert mgf(CoeffDistribution(DistKind.LAPLACE, 1.0), 0.5) == pytest.approx(1.0 / 0.75)
    assert mgf(CoeffDistribution(DistKind.UNIFORM, 2.0), 0.0) == 1.0


def test_log_mgf_matches_mgf():
    for spec in ('rademacher', 'gaussian', 'uniform:a=1.5', 'laplace:b=1'):
        dist = CoeffDistribution.parse(spec)
        for t in (-0.4, 0.1, 0.3):
            assert float(log_mgf(dist, t)) == pytest.approx(math.log(mgf(dist, t)), abs=1e-12)


def test_mgf_outside_radius():
    with pytest.raises(DomainError):
        mgf(CoeffDistribution(DistKind.LAPLACE, 1.0), 1.0)


def test_empirical_mgf_close_to_analytic():
    dist = CoeffDistribution(DistKind.GAUSSIAN)
    est = empirical_mgf(dist, [-0.5, 0.0, 0.5], 100_000, 9)
    assert est.values[1] == 1.0
    assert est.values[2] == pytest.approx(mgf(dist, 0.5), rel=0.02)


def test_gamma_gaussian_is_one():
    assert local_subgaussian_gamma(CoeffDistribution(DistKind.GAUSSIAN), 2.0, 401) == pytest.approx(1.0, abs=1e-12)


def test_gamma_rademacher_at_most_one():
    gamma = local_subgaussian_gamma(CoeffDistribution(DistKind.RADEMACHER), 1.0, 401)
    assert 1.0 - 1e-6 < gamma <= 1.0 + 1e-12


def test_gamma_laplace_matches_grid_maximum():
    dist = CoeffDistribution(DistKind.LAPLACE, 1.0)
    t = np.linspace(-0.5, 0.5, 1001)
    t = t[t != 0]
    expected = max(2.0, float(np.max(-2.0 * np.log(1.0 - t * t) / (t * t))))
    gamma = local_subgaussian_gamma(dist, 0.5, 1001)
    assert gamma == pytest.approx(expected, abs=1e-9)
    assert gamma > dist.variance - 1e-6


def test_gamma_rejects_delta_outside_domain():
    with pytest.raises(DomainError):
        local_subgaussian_gamma(CoeffDistribution(DistKind.LAPLACE, 1.0), 1.5, 11)


def test_exp_tail_fit_bounded_support():
    fit = exp_tail_fit(CoeffDistribution(DistKind.UNIFORM, 1.0), [2.0, 3.0], 20_000, 1)
    assert fit == TailFit(1.0, math.inf)


def test_exp_tail_fit_laplace():
    fit = exp_tail_fit(CoeffDistribution(DistKind.LAPLACE, 1.0), np.linspace(0.5, 4.0, 8), 200_000, 5)
    assert fit.c == pytest.approx(1.0, abs=0.1)
    assert fit.b == pytest.approx(1.0, rel=0.2)


def test_exp_tail_fit_needs_samples():
    with pytest.raises(ParameterError):
        exp_tail_fit(CoeffDistribution(DistKind.GAUSSIAN), [1.0, 2.0], 100, 1)


def test_abs_mean_and_concentration():
    assert abs_mean(CoeffDistribution(DistKind.GAUSSIAN)) == pytest.approx(math.sqrt(2 / math.pi))
    assert abs_mean(CoeffDistribution(DistKind.UNIFORM, 2.0)) == 1.0
    assert concentration(CoeffDistribution(DistKind.RADEMACHER), 0.5) == 0.5
    assert concentration(CoeffDistribution(DistKind.UNIFORM, 2.0), 1.0) == 0.5


def test_anticoncentration_params():
    assert anticoncentration_params(CoeffDistribution(DistKind.RADEMACHER), 1.0) is None
    p, k = anticoncentration_params(CoeffDistribution(DistKind.RADEMACHER), 0.5)
    assert (p, k) == (0.5, 1.0)
    p, k = anticoncentration_params(CoeffDistribution(DistKind.LAPLACE, 1.0), 1.0)
    assert math.exp(-k) == pytest.approx(p / 2.0)
