import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from core.errors import InsufficientDataError, RangeError


@dataclass(frozen=True)
class TailEstimate:
    n: int
    param: float
    hits: int
    trials: int
    p_hat: float
    ci_lo: float
    ci_hi: float
    param_index: int = 0

    @classmethod
    def from_counts(cls, n: int, param: float, hits: int, trials: int, param_index: int = 0) -> 'TailEstimate':
        lo, hi = wilson_interval(hits, trials)
        p_hat = hits / trials
        return cls(int(n), float(param), int(hits), int(trials), p_hat, min(lo, p_hat), max(hi, p_hat), param_index)

    @property
    def half_width(self) -> float:
        return (self.ci_hi - self.ci_lo) / 2.0

    def to_dict(self) -> dict:
        return asdict(self)


class ScalingFit(NamedTuple):
    slope: float
    intercept: float
    r2: float


def wilson_interval(hits: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """
    95%-й (по умолчанию) интервал Уилсона для доли успехов.

    Аргументы:
        hits (int): число успехов, 0 <= hits <= trials.
        trials (int): число испытаний, не меньше 1.
        z (float): квантиль нормального закона.

    Возвращает:
        tuple: (lo, hi) в пределах [0, 1].
    """
    if trials < 1 or not 0 <= hits <= trials:
        raise RangeError(f'need 0 <= hits <= trials and trials >= 1, got {hits}/{trials}')
    p = hits / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (p + z2 / (2.0 * trials)) / denom
    half = z / denom * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    lo = 0.0 if hits == 0 else max(0.0, centre - half)
    hi = 1.0 if hits == trials else min(1.0, centre + half)
    return lo, hi


def scaling_fit(points) -> ScalingFit:
    """Наклон прямой МНК в координатах (log x, log p); точки с p <= 0 отбрасываются."""
    data = np.asarray(list(points), dtype=np.float64).reshape(-1, 2)
    data = data[(data[:, 0] > 0) & (data[:, 1] > 0)]
    if data.shape[0] < 3:
        raise InsufficientDataError(f'scaling fit needs 3 positive points, got {data.shape[0]}')
    x, y = np.log(data[:, 0]), np.log(data[:, 1])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    total = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if total == 0.0 else 1.0 - float(np.sum((y - fitted) ** 2)) / total
    return ScalingFit(float(slope), float(intercept), r2)
