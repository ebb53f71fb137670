import math

import numpy as np

from core.coeff_dist import CoeffDistribution, DistKind
from core.errors import UnsupportedError
from core.polynomial import WeightFn


def char_weights(phi: WeightFn, n: int, x: float, s: tuple[float, float]) -> np.ndarray:
    """psi_j = (1/pi)(1/sqrt n) phi(j/n)(s1 cos jx + s2 sin jx), j = 0..n-1."""
    j = np.arange(n, dtype=np.float64)
    s1, s2 = s
    return phi(j / n) * (s1 * np.cos(j * x) + s2 * np.sin(j * x)) / (math.pi * math.sqrt(n))


def char_fn_product(dist: CoeffDistribution, phi: WeightFn, n: int, x: float, s: tuple[float, float]) -> float:
    """
    Точное значение prod_j E cos(pi xi psi_j) по замкнутым формулам для симметричных законов.

    Аргументы:
        dist (CoeffDistribution): закон xi.
        phi (WeightFn): весовая функция.
        n (int): число слагаемых.
        x (float): угол.
        s (tuple): точка (s1, s2).

    Возвращает:
        float: произведение.
    """
    psi = char_weights(phi, n, x, s)
    arg = math.pi * psi
    if dist.kind is DistKind.RADEMACHER:
        factors = np.cos(arg)
    elif dist.kind is DistKind.GAUSSIAN:
        return float(math.exp(-0.5 * float(np.sum(arg * arg))))
    elif dist.kind is DistKind.UNIFORM:
        factors = np.sinc(dist.param * psi)
    elif dist.kind is DistKind.LAPLACE:
        factors = 1.0 / (1.0 + (dist.param * arg) ** 2)
    else:
        raise UnsupportedError(f'no closed form for {dist.spec}')
    return float(np.prod(factors))
