import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from core.errors import ParameterError, RangeError


FACTOR_CAP = 10 ** 12
DEFAULT_L = 2.0
MIN_GRID = 64


@dataclass(frozen=True)
class VkMatrix:
    """Матрица 2 x n: столбец j равен (cos(2 pi k j / n), sin(2 pi k j / n))."""

    n: int
    k: int

    @property
    def angles(self) -> np.ndarray:
        j = np.arange(self.n, dtype=np.int64)
        return 2.0 * np.pi * ((self.k * j) % self.n) / self.n

    @property
    def matrix(self) -> np.ndarray:
        angles = self.angles
        return np.vstack((np.cos(angles), np.sin(angles)))

    def apply(self, x) -> np.ndarray:
        """V_k X: вещественная и мнимая часть k-го собственного значения circ(X)."""
        return self.matrix @ np.asarray(x, dtype=np.float64)

    def apply_transpose(self, theta) -> np.ndarray:
        """V_k^T theta для theta формы (..., 2)."""
        return np.asarray(theta, dtype=np.float64) @ self.matrix


@dataclass(frozen=True)
class LcdCertificate:
    n: int
    k: int
    L: float
    t_range: tuple[float, float]
    grid: tuple[int, int]
    min_ratio: float
    certified_lower_bound: float
    violated: bool

    def to_json(self) -> dict:
        data = asdict(self)
        data.pop('violated')
        data['t_range'] = list(self.t_range)
        data['grid'] = list(self.grid)
        if not math.isfinite(self.min_ratio):
            data['min_ratio'] = None
        return data


def vk(n: int, k: int) -> VkMatrix:
    if n < 2 or not 0 <= k < n:
        raise RangeError(f'need n >= 2 and 0 <= k < n, got n={n}, k={k}')
    return VkMatrix(n, k)


def dist_to_lattice(v) -> np.ndarray | float:
    """Евклидово расстояние до Z^n по последней оси; полуцелые округляются к четному."""
    v = np.asarray(v, dtype=np.float64)
    value = np.sqrt(np.sum((v - np.rint(v)) ** 2, axis=-1))
    return float(value) if value.ndim == 0 else value


def _scan_radii(table: np.ndarray, radii: np.ndarray, L: float) -> tuple[int | None, float]:
    first = None
    best = math.inf
    for idx, t in enumerate(radii):
        image = t * table
        norms = np.sqrt(np.sum(image * image, axis=-1))
        log_plus = np.log(np.maximum(norms / L, 1.0))
        active = log_plus > 0
        if not active.any():
            continue
        dist = dist_to_lattice(image[active])
        threshold = L * np.sqrt(log_plus[active])
        best = min(best, float(np.min(dist / threshold)))
        if first is None and np.any(dist < threshold):
            first = idx
    return first, best


def lcd_search(V: VkMatrix, L: float = DEFAULT_L, t_min: float = 0.5, t_max: float = 10.0,
               n_t: int = 2048, n_alpha: int = 4096, workers: int = 1) -> LcdCertificate:
    """
    Сеточный сертификат для наименьшего общего знаменателя D(V_k).

    Перебирает theta = t (cos a, sin a): t по логарифмической сетке [t_min, t_max],
    a равномерно на [0, pi). Ищет наименьший радиус, где
        dist(V^T theta, Z^n) < L sqrt(log_+(||V^T theta|| / L)).

    Аргументы:
        V (VkMatrix): матрица V_k.
        L (float): параметр определения (по умолчанию 2).
        t_min, t_max (float): диапазон радиусов.
        n_t, n_alpha (int): размеры сетки, не меньше 64.
        workers (int): число потоков для разбиения по радиусам.

    Возвращает:
        LcdCertificate: certified_lower_bound равен первому нарушающему радиусу или t_max.
    """
    if not 0 < t_min < t_max:
        raise ParameterError(f'need 0 < t_min < t_max, got {t_min}, {t_max}')
    if n_t < MIN_GRID or n_alpha < MIN_GRID:
        raise ParameterError(f'grid must be at least {MIN_GRID} x {MIN_GRID}')
    if L <= 0:
        raise ParameterError('L must be positive')

    radii = np.geomspace(t_min, t_max, n_t)
    alphas = np.pi * np.arange(n_alpha) / n_alpha
    # V^T theta_j = t cos(2 pi k j / n - a)
    table = np.cos(V.angles[None, :] - alphas[:, None])

    chunks = np.array_split(np.arange(n_t), max(1, workers))
    chunks = [c for c in chunks if c.size]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _scan_radii(table, radii[c], L), chunks))
    else:
        parts = [_scan_radii(table, radii[c], L) for c in chunks]

    first = None
    for chunk, (hit, _) in zip(chunks, parts):
        if hit is not None:
            first = int(chunk[hit])
            break
    min_ratio = min(best for _, best in parts)
    bound = float(radii[first]) if first is not None else float(t_max)
    return LcdCertificate(V.n, V.k, float(L), (float(t_min), float(t_max)), (n_t, n_alpha),
                          min_ratio, bound, first is not None)


def factorize(n: int) -> dict[int, int]:
    """Разложение на простые множители пробным делением (n <= 10^12)."""
    if n < 1:
        raise RangeError(f'n must be a positive integer, got {n}')
    if n > FACTOR_CAP:
        raise RangeError(f'factorization capped at {FACTOR_CAP}')
    factors: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n:
        for q in (p, p + 2):
            while n % q == 0:
                factors[q] = factors.get(q, 0) + 1
                n //= q
        p += 6
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def totient(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def divisor_count(m: int) -> int:
    return math.prod(e + 1 for e in factorize(m).values())


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)


def gcd_class_counts(n: int) -> dict[int, int]:
    """#{0 <= k < n : gcd(k, n) = d} = T(n/d) для каждого делителя d."""
    return {d: totient(n // d) for d in divisors(n)}


def gcd_threshold_count(n: int, nu: float) -> tuple[int, int]:
    """
    Возвращает:
        tuple: (точное число k с gcd(k, n) > n^nu, сумма T(n/d) по d | n, d >= floor(n^nu)).
    """
    if not 0 < nu < 1:
        raise RangeError(f'nu must lie in (0, 1), got {nu}')
    threshold = n ** nu
    counts = gcd_class_counts(n)
    exact = sum(c for d, c in counts.items() if d > threshold)
    bound = sum(c for d, c in counts.items() if d >= math.floor(threshold))
    return exact, bound


def totient_gap_failures(limit: int) -> list[int]:
    """Все m <= limit, для которых T(m) > m - sqrt(m)."""
    return [m for m in range(1, limit + 1) if totient(m) > m - math.sqrt(m)]


def column_step(n: int, k: int, alphas) -> float:
    """max_j |cos(2 pi (j+1) k / n - a) - cos(2 pi j k / n - a)| по сетке a."""
    j = np.arange(n + 1)
    alphas = np.atleast_1d(np.asarray(alphas, dtype=np.float64))
    values = np.cos(2.0 * np.pi * j[None, :] * k / n - alphas[:, None])
    return float(np.max(np.abs(np.diff(values, axis=1))))
