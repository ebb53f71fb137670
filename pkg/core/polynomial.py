import enum
import math
from dataclasses import dataclass, field

import numpy as np

from core.coeff_dist import CoeffDistribution, draw
from core.dft import dft_forward
from core.errors import CertificationError, ParameterError, ResolutionError
from core.rng import mix


HOLDER_FINE_GRID = 100_001
HOLDER_PAIR_GRID = 2_001
# интервал показателя, для которого оценка кольца доказана
PROOF_SIGMA_RANGE = (0.5, 0.55)
ANNULUS_MAX_GRID = 1 << 26


class WeightKind(enum.Enum):
    CONSTANT = 'const'
    LINEAR = 'linear'
    POWER = 'power'


def holder_norm(fn, order: float, fine_points: int = HOLDER_FINE_GRID, pair_points: int = HOLDER_PAIR_GRID) -> float:
    """
    Норма C^order на [0, 1]: max|f| плюс максимум гёльдерова отношения на сетке.

    Отношение берется по всем парам грубой сетки (pair_points узлов) и по парам,
    содержащим концы отрезка или соседние узлы, на тонкой сетке (fine_points узлов).
    """
    fine = np.linspace(0.0, 1.0, fine_points)
    values = fn(fine)
    best = 0.0

    def _ratio(a, b, fa, fb):
        gap = np.abs(a - b)
        mask = gap > 0
        if not mask.any():
            return 0.0
        return float(np.max(np.abs(fa[mask] - fb[mask]) / gap[mask] ** order))

    best = max(best, _ratio(fine[1:], fine[:-1], values[1:], values[:-1]))
    best = max(best, _ratio(fine, np.zeros_like(fine), values, np.full_like(values, values[0])))
    best = max(best, _ratio(fine, np.ones_like(fine), values, np.full_like(values, values[-1])))

    coarse = np.linspace(0.0, 1.0, pair_points)
    coarse_values = fn(coarse)
    for i in range(pair_points - 1):
        best = max(best, _ratio(
            coarse[i + 1:], np.full_like(coarse[i + 1:], coarse[i]),
            coarse_values[i + 1:], np.full_like(coarse_values[i + 1:], coarse_values[i]),
        ))
    return float(np.max(np.abs(values))) + best


def _raw_weight(kind: WeightKind, sigma: float):
    if kind is WeightKind.CONSTANT:
        return lambda x: np.ones_like(np.asarray(x, dtype=np.float64))
    if kind is WeightKind.LINEAR:
        return lambda x: np.asarray(x, dtype=np.float64)
    return lambda x: np.asarray(x, dtype=np.float64) ** sigma


@dataclass(frozen=True)
class WeightFn:
    kind: WeightKind
    holder_order: float = 1.0
    normalization: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.kind is not WeightKind.POWER and self.holder_order != 1.0:
            raise ParameterError(f'{self.kind.value} weight has Holder order 1')
        if not 0.5 < self.holder_order <= 1.0:
            raise ParameterError(f'Holder order must lie in (1/2, 1], got {self.holder_order}')
        if self.normalization == 0.0:
            raw = _raw_weight(self.kind, self.holder_order)
            object.__setattr__(self, 'normalization', 1.0 / holder_norm(raw, self.holder_order))

    @classmethod
    def parse(cls, spec: str) -> 'WeightFn':
        """Строки "const", "linear", "power:sigma=0.6"."""
        name, _, rest = spec.strip().lower().partition(':')
        try:
            kind = WeightKind(name)
        except ValueError:
            raise ParameterError(f'Unknown weight "{spec}"') from None
        if kind is not WeightKind.POWER:
            if rest:
                raise ParameterError(f'{kind.value} weight takes no parameters')
            return cls(kind)
        key, _, value = rest.partition('=')
        if key.strip() != 'sigma':
            raise ParameterError(f'power weight needs sigma=..., got "{spec}"')
        try:
            return cls(kind, float(value))
        except ValueError:
            raise ParameterError(f'Bad number in "{spec}"') from None

    @property
    def spec(self) -> str:
        if self.kind is WeightKind.POWER:
            return f'power:sigma={self.holder_order:g}'
        return self.kind.value

    @property
    def in_proof_range(self) -> bool:
        low, high = PROOF_SIGMA_RANGE
        return low < self.holder_order < high

    def __call__(self, x) -> np.ndarray:
        return self.normalization * _raw_weight(self.kind, self.holder_order)(x)

    def __str__(self) -> str:
        return self.spec


@dataclass(frozen=True, eq=False)
class RandomPoly:
    """G_{n,phi}(z) = sum_j c_j z^j, c_j = xi_j phi(j/n); T_n(x) = G_{n,phi}(e^{ix})."""

    n: int
    coeffs: np.ndarray
    dist_tag: str = ''
    seed: int | None = None
    weight_tag: str = ''

    @classmethod
    def from_coeffs(cls, coeffs, tag: str = 'explicit') -> 'RandomPoly':
        arr = np.asarray(coeffs, dtype=np.complex128).copy()
        if arr.ndim != 1 or arr.size < 1:
            raise ParameterError('coefficients must be a non-empty 1-D sequence')
        arr.flags.writeable = False
        return cls(arr.size, arr, dist_tag=tag)

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))


def build_poly(dist: CoeffDistribution, phi: WeightFn, n: int, seed: int) -> RandomPoly:
    """
    Случайный многочлен степени n-1: коэффициент j берется из потока mix(seed, j).

    Аргументы:
        dist (CoeffDistribution): закон xi.
        phi (WeightFn): весовая функция.
        n (int): число коэффициентов, n >= 2.
        seed (int): базовое зерно.

    Возвращает:
        RandomPoly: неизменяемый многочлен.
    """
    if n < 2:
        raise ParameterError('n must be at least 2')
    coeffs = weighted_coeffs(dist, phi, n, mix(seed, np.arange(n, dtype=np.uint64))).astype(np.complex128)
    coeffs.flags.writeable = False
    return RandomPoly(n, coeffs, dist.spec, seed, phi.spec)


def weighted_coeffs(dist: CoeffDistribution, phi: WeightFn | None, n: int, keys) -> np.ndarray:
    """Коэффициенты xi_j phi(j/n) для ключей формы (..., n)."""
    xi = draw(dist, keys)
    if phi is None:
        return xi
    return xi * phi(np.arange(n) / n)


def _horner(coeffs: np.ndarray, z) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def derivative_coeffs(coeffs: np.ndarray) -> np.ndarray:
    if coeffs.size <= 1:
        return np.zeros(1, dtype=np.complex128)
    return coeffs[1:] * np.arange(1, coeffs.size)


def evaluate(p: RandomPoly, z):
    """Значение p(z) по схеме Горнера (z скаляр или массив)."""
    value = _horner(p.coeffs, z)
    return complex(value) if value.ndim == 0 else value


def eval_derivatives(p: RandomPoly, z, order: int = 2) -> list:
    if order not in (0, 1, 2):
        raise ParameterError('order must be 0, 1 or 2')
    out = []
    coeffs = p.coeffs
    for _ in range(order + 1):
        value = _horner(coeffs, z)
        out.append(complex(value) if value.ndim == 0 else value)
        coeffs = derivative_coeffs(coeffs)
    return out


def trig_eval(p: RandomPoly, x):
    """T_n(x) = sum_j c_j e^{ijx}."""
    return evaluate(p, np.exp(1j * np.asarray(x, dtype=np.float64)))


def trig_derivative(p: RandomPoly, x):
    """T'_n(x) = sum_j i j c_j e^{ijx}."""
    value = _horner(1j * p.coeffs * np.arange(p.n), np.exp(1j * np.asarray(x, dtype=np.float64)))
    return complex(value) if value.ndim == 0 else value


def circle_values(coeffs: np.ndarray, grid_size: int) -> np.ndarray:
    """
    Значения sum_j c_j e^{ijx} в узлах x_m = 2 pi m / grid_size по последней оси.
    Коэффициенты длиннее сетки сворачиваются по модулю grid_size.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    n = coeffs.shape[-1]
    padded = np.zeros(coeffs.shape[:-1] + (grid_size,), dtype=np.complex128)
    if n <= grid_size:
        padded[..., :n] = coeffs
    else:
        for start in range(0, n, grid_size):
            chunk = coeffs[..., start:start + grid_size]
            padded[..., :chunk.shape[-1]] += chunk
    return dft_forward(padded)


def sup_norm_certified(p: RandomPoly, grid_size: int) -> tuple[float, float]:
    """
    Сертифицированная вилка для sup|T_n| по неравенству Бернштейна.

    Возвращает:
        tuple: (lower, upper), lower = максимум на сетке, upper = lower / (1 - 2 pi n / grid_size).
    """
    if grid_size < 8 * p.n:
        raise CertificationError(f'grid_size={grid_size} must be at least 8n={8 * p.n}')
    lower = float(np.max(np.abs(circle_values(p.coeffs, grid_size))))
    return lower, lower / (1.0 - 2.0 * math.pi * p.n / grid_size)


def batch_sup_lower(coeffs: np.ndarray, grid_size: int) -> np.ndarray:
    """Нижние оценки sup-нормы для стопки многочленов (..., n)."""
    return np.max(np.abs(circle_values(coeffs, grid_size)), axis=-1)


def second_derivative_majorant(p: RandomPoly, radius: float | None = None, offset: int = 0) -> float:
    """
    sum_j j(j-1) |c_j| radius^{j+offset}; radius по умолчанию 1 + n^{-2}.
    """
    if radius is None:
        radius = 1.0 + p.n ** -2.0
    j = np.arange(p.n, dtype=np.float64)
    weights = j * (j - 1.0) * np.abs(p.coeffs)
    return float(np.sum(weights * radius ** np.maximum(j + offset, 0.0)))


def _fine_grid_size(spacing: float) -> int:
    return 1 << max(3, math.ceil(math.log2(2.0 * math.pi / spacing)))


def annulus_min_moduli(p: RandomPoly, eps_list, spacing: float | None = None, max_grid: int = ANNULUS_MAX_GRID) -> np.ndarray:
    """
    Оценка inf |G_{n,phi}(z)| по кольцу ||z|-1| < eps n^{-2} для набора eps на общей сетке окружности.

    Для каждого eps ищется минимум по узлам x_a сетки (шаг не больше spacing) величины
        max(0, |T(x_a)| - 2 eps n^{-2} |T'(x_a)| - R),  R = 2 (eps n^{-2})^2 M2,
    M2 = sum j(j-1)|c_j|(1+n^{-2})^j. Тонкая сетка не строится целиком: грубые ячейки
    отсекаются по нижней оценке из разложения Тейлора (ветви и границы), поэтому результат
    совпадает с минимумом по всей тонкой сетке.

    Аргументы:
        p (RandomPoly): многочлен.
        eps_list: значения eps > 0.
        spacing (float | None): шаг сетки; по умолчанию min(eps) n^{-2}.
        max_grid (int): предел числа узлов тонкой сетки.

    Возвращает:
        np.ndarray: оценки в порядке eps_list.
    """
    eps = np.atleast_1d(np.asarray(eps_list, dtype=np.float64))
    if np.any(eps <= 0):
        raise ParameterError('eps must be positive')
    n = p.n
    scale = n ** -2.0
    if spacing is None:
        spacing = float(eps.min()) * scale
    fine = _fine_grid_size(spacing)
    if fine > max_grid:
        raise ResolutionError(
            f'annulus grid of {fine} points exceeds the cap of {max_grid}; lower n or raise the spacing'
        )

    coeffs = p.coeffs
    j = np.arange(n, dtype=np.float64)
    m2 = float(np.sum(j * (j - 1.0) * np.abs(coeffs) * (1.0 + scale) ** j))
    s2 = float(np.sum(j * j * np.abs(coeffs)))
    remainders = 2.0 * (eps * scale) ** 2 * m2
    slopes = 2.0 * eps * scale

    coarse = min(fine, 1 << max(3, math.ceil(math.log2(8.0 * math.pi * n ** 1.25))))
    step = 2.0 * math.pi / coarse
    t_coarse = np.abs(circle_values(coeffs, coarse))
    dt_coarse = np.abs(circle_values(1j * j * coeffs, coarse))
    per_cell = fine // coarse
    offsets = np.arange(per_cell) * (2.0 * math.pi / fine)
    deriv = 1j * j * coeffs

    chunk = max(1, 4096 // per_cell)
    out = np.empty(eps.size)
    for idx in range(eps.size):
        bound = (t_coarse - step * dt_coarse - 0.5 * step * step * s2
                 - slopes[idx] * (dt_coarse + step * s2) - remainders[idx])
        order = np.argsort(bound, kind='stable')
        best = math.inf
        for start in range(0, coarse, chunk):
            cells = order[start:start + chunk]
            if best <= 0.0 or bound[cells[0]] >= best:
                break
            x = (cells[:, None] * step + offsets[None, :]).ravel()
            z = np.exp(1j * x)
            values = np.maximum(0.0, np.abs(_horner(coeffs, z)) - slopes[idx] * np.abs(_horner(deriv, z)) - remainders[idx])
            best = min(best, float(values.min()))
        out[idx] = max(best, 0.0)
    return out


def annulus_min_modulus(p: RandomPoly, eps: float, n: int | None = None, spacing: float | None = None) -> float:
    if n is not None and n != p.n:
        raise ParameterError(f'n={n} does not match the polynomial (n={p.n})')
    return float(annulus_min_moduli(p, [eps], spacing)[0])
