import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import stats

from core.errors import DomainError, InsufficientDataError, ParameterError
from core.rng import RngState, mix, uniforms


class DistKind(enum.Enum):
    RADEMACHER = 'rademacher'
    GAUSSIAN = 'gaussian'
    UNIFORM = 'uniform'
    LAPLACE = 'laplace'


_PARAM_NAME = {DistKind.UNIFORM: 'a', DistKind.LAPLACE: 'b'}


@dataclass(frozen=True)
class CoeffDistribution:
    kind: DistKind
    param: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.param) or self.param <= 0:
            raise ParameterError(f'{self.kind.value}: scale must be positive, got {self.param}')

    @classmethod
    def parse(cls, spec: str) -> 'CoeffDistribution':
        """
        Разбирает строку вида "rademacher", "gaussian", "uniform:a=1.0", "laplace:b=1.0".
        """
        name, _, rest = spec.strip().lower().partition(':')
        try:
            kind = DistKind(name)
        except ValueError:
            raise ParameterError(f'Unknown distribution "{spec}"') from None
        if not rest:
            return cls(kind)
        key, _, value = rest.partition('=')
        if kind not in _PARAM_NAME or key.strip() != _PARAM_NAME[kind]:
            raise ParameterError(f'Bad parameter "{rest}" for {kind.value}')
        try:
            return cls(kind, float(value))
        except ValueError:
            raise ParameterError(f'Bad number in "{spec}"') from None

    @property
    def spec(self) -> str:
        if self.kind in _PARAM_NAME:
            return f'{self.kind.value}:{_PARAM_NAME[self.kind]}={self.param:g}'
        return self.kind.value

    @property
    def mean(self) -> float:
        return 0.0

    @property
    def variance(self) -> float:
        if self.kind is DistKind.UNIFORM:
            return self.param ** 2 / 3.0
        if self.kind is DistKind.LAPLACE:
            return 2.0 * self.param ** 2
        return 1.0

    @property
    def mgf_radius(self) -> float:
        if self.kind is DistKind.LAPLACE:
            return 1.0 / self.param
        return math.inf

    def __str__(self) -> str:
        return self.spec


class MgfEstimate(NamedTuple):
    t_grid: np.ndarray
    values: np.ndarray
    n_samples: int
    seed: int


class TailFit(NamedTuple):
    b: float
    c: float


def draw(dist: CoeffDistribution, keys, counter: int = 0) -> np.ndarray:
    """
    Векторная выборка: по одному значению на каждый ключ потока.

    Аргументы:
        dist (CoeffDistribution): закон коэффициентов.
        keys: массив uint64 ключей потоков (любой формы).
        counter (int): номер первого отсчета в каждом потоке.

    Возвращает:
        np.ndarray: значения той же формы, что и keys.
    """
    u = uniforms(keys, counter)
    if dist.kind is DistKind.RADEMACHER:
        return np.where(u < 0.5, -1.0, 1.0)
    if dist.kind is DistKind.UNIFORM:
        return dist.param * (2.0 * u - 1.0)
    if dist.kind is DistKind.LAPLACE:
        centred = u - 0.5
        return -dist.param * np.sign(centred) * np.log1p(-2.0 * np.abs(centred))
    # Бокс-Мюллер, берется только косинусная ветка
    u2 = uniforms(keys, counter + 1)
    return np.sqrt(-2.0 * np.log(u)) * np.cos(2.0 * np.pi * u2)


def _uniforms_per_draw(dist: CoeffDistribution) -> int:
    return 2 if dist.kind is DistKind.GAUSSIAN else 1


def sample(dist: CoeffDistribution, rng_state: RngState) -> float:
    """Одна величина из потока rng_state; счетчик сдвигается детерминированно."""
    value = draw(dist, np.uint64(rng_state.key), rng_state.counter)
    rng_state.counter += _uniforms_per_draw(dist)
    return float(value)


def sample_many(dist: CoeffDistribution, seed: int, count: int) -> np.ndarray:
    """count независимых значений: i-е берется из потока mix(seed, i)."""
    return draw(dist, mix(seed, np.arange(count, dtype=np.uint64)))


def log_mgf(dist: CoeffDistribution, t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if np.any(np.abs(t) >= dist.mgf_radius):
        raise DomainError(f'|t| must stay below {dist.mgf_radius} for {dist.spec}')
    if dist.kind is DistKind.RADEMACHER:
        # log cosh без переполнения
        at = np.abs(t)
        return at + np.log1p(np.exp(-2.0 * at)) - math.log(2.0)
    if dist.kind is DistKind.GAUSSIAN:
        return t * t / 2.0
    if dist.kind is DistKind.LAPLACE:
        return -np.log1p(-(dist.param * t) ** 2)
    x = dist.param * np.abs(t)
    safe = np.where(x == 0.0, 1.0, x)
    return np.where(x == 0.0, 0.0, x + np.log(-np.expm1(-2.0 * safe) / (2.0 * safe)))


def mgf(dist: CoeffDistribution, t: float) -> float:
    """
    Аналитическая производящая функция моментов M(t) = E exp(t*xi).

    Возвращает:
        float: cosh(t), exp(t^2/2), sinh(at)/(at) или 1/(1-b^2 t^2).
    """
    t = float(t)
    if abs(t) >= dist.mgf_radius:
        raise DomainError(f'|t| must stay below {dist.mgf_radius} for {dist.spec}')
    if dist.kind is DistKind.RADEMACHER:
        return math.cosh(t)
    if dist.kind is DistKind.GAUSSIAN:
        return math.exp(t * t / 2.0)
    if dist.kind is DistKind.LAPLACE:
        return 1.0 / (1.0 - (dist.param * t) ** 2)
    at = dist.param * t
    return 1.0 if at == 0.0 else math.sinh(at) / at


def empirical_mgf(dist: CoeffDistribution, t_grid, n_samples: int, seed: int) -> MgfEstimate:
    t_grid = np.asarray(t_grid, dtype=np.float64)
    samples = sample_many(dist, seed, n_samples)
    values = np.array([np.mean(np.exp(t * samples)) for t in t_grid])
    return MgfEstimate(t_grid, values, n_samples, seed)


def local_subgaussian_gamma(dist: CoeffDistribution, delta: float, grid_points: int) -> float:
    """
    Наименьшее gamma на сетке |t| <= delta, при котором M(t) <= exp(gamma t^2 / 2).

    В точке t = 0 берется непрерывное продолжение 2 ln M(t) / t^2, то есть дисперсия.

    Аргументы:
        dist (CoeffDistribution): закон коэффициентов.
        delta (float): полуширина сетки, 0 < delta < mgf_radius.
        grid_points (int): число узлов равномерной сетки, не меньше 3.

    Возвращает:
        float: сертификат gamma на сетке.
    """
    if not 0 < delta < dist.mgf_radius:
        raise DomainError(f'delta={delta} is outside (0, {dist.mgf_radius})')
    if grid_points < 3:
        raise ParameterError('grid_points must be at least 3')
    t = np.linspace(-delta, delta, grid_points)
    t = t[t != 0.0]
    ratios = 2.0 * log_mgf(dist, t) / (t * t)
    return float(max(dist.variance, ratios.max()))


def exp_tail_fit(dist: CoeffDistribution, x_grid, n_samples: int, seed: int, min_exceedances: int = 50) -> TailFit:
    """
    Подгонка Pr(|xi| >= x) <= b exp(-c x) методом наименьших квадратов по log-хвосту.

    Узлы, где превышений меньше min_exceedances, отбрасываются. Если хвост пуст во всех
    узлах (ограниченный носитель), возвращается TailFit(1.0, inf).
    """
    x_grid = np.asarray(x_grid, dtype=np.float64)
    if np.any(x_grid <= 0) or np.any(np.diff(x_grid) <= 0):
        raise ParameterError('x_grid must be positive and increasing')
    if n_samples < 10_000:
        raise ParameterError('n_samples must be at least 1e4')
    magnitudes = np.sort(np.abs(sample_many(dist, seed, n_samples)))
    counts = n_samples - np.searchsorted(magnitudes, x_grid, side='left')
    if not counts.any():
        return TailFit(1.0, math.inf)
    usable = counts >= min_exceedances
    if usable.sum() < 2:
        raise InsufficientDataError(f'only {int(usable.sum())} grid points have {min_exceedances}+ exceedances')
    slope, intercept = np.polyfit(x_grid[usable], np.log(counts[usable] / n_samples), 1)
    return TailFit(float(math.exp(intercept)), float(-slope))


def abs_mean(dist: CoeffDistribution) -> float:
    if dist.kind is DistKind.GAUSSIAN:
        return math.sqrt(2.0 / math.pi)
    if dist.kind is DistKind.UNIFORM:
        return dist.param / 2.0
    if dist.kind is DistKind.LAPLACE:
        return dist.param
    return 1.0


def concentration(dist: CoeffDistribution, radius: float) -> float:
    """Функция концентрации Леви sup_u Pr(|xi - u| <= radius)."""
    if radius < 0:
        raise ParameterError('radius must be non-negative')
    if dist.kind is DistKind.RADEMACHER:
        return 1.0 if radius >= 1.0 else 0.5
    if dist.kind is DistKind.GAUSSIAN:
        return float(2.0 * stats.norm.cdf(radius) - 1.0)
    if dist.kind is DistKind.UNIFORM:
        return min(1.0, radius / dist.param)
    return -math.expm1(-radius / dist.param)


def anticoncentration_params(dist: CoeffDistribution, radius: float = 1.0) -> tuple[float, float] | None:
    """
    Пара (p, K) для оценки хвоста s_n: sup_u Pr(|xi-u| <= radius) <= 1-p
    и Pr(|xi| > K) <= p/2. Возвращает None, если p = 0 (условие не выполняется).
    """
    p = 1.0 - concentration(dist, radius)
    if p <= 0.0:
        return None
    if dist.kind is DistKind.RADEMACHER:
        return p, 1.0
    if dist.kind is DistKind.GAUSSIAN:
        return p, float(stats.norm.isf(p / 4.0))
    if dist.kind is DistKind.UNIFORM:
        return p, dist.param * (1.0 - p / 2.0)
    return p, dist.param * math.log(2.0 / p)
