import enum
import math
import os
from dataclasses import asdict, dataclass, fields, replace

from dotenv import dotenv_values

from core.coeff_dist import CoeffDistribution
from core.errors import ConfigError, ParameterError
from core.polynomial import WeightFn


MIN_TRIALS = 100
ANNULUS_MAX_N = 1024
GCIRC_DENSE_MAX_N = 64
GOLDEN_ANGLE = 2.0 * math.pi * ((1.0 + math.sqrt(5.0)) / 2.0 % 1.0)


class ExperimentKind(enum.Enum):
    SN_TAIL_EPS = 'SnTailEps'
    SN_TAIL_RHO = 'SnTailRho'
    ANNULUS_INF = 'AnnulusInf'
    SALEM_ZYGMUND = 'SalemZygmund'
    DERIV_SUP = 'DerivSup'
    SECOND_DERIV = 'SecondDeriv'
    SMALL_BALL = 'SmallBall'
    ROOT_STATS = 'RootStats'
    CHAR_FN = 'CharFn'
    TAYLOR_RATIO = 'TaylorRatio'
    GCIRC_TAIL_RHO = 'GCircTailRho'

    @classmethod
    def parse(cls, text: str) -> 'ExperimentKind':
        for kind in cls:
            if kind.value.lower() == text.strip().lower():
                return kind
        raise ConfigError(f'Unknown experiment "{text}"; choose from {[k.value for k in cls]}')


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: ExperimentKind
    dist: str
    n_list: tuple[int, ...]
    param_grid: tuple[float, ...]
    trials: int
    phi: str = 'const'
    base_seed: int = 0
    threads: int = 1
    angle: float = GOLDEN_ANGLE
    grid_factor: int = 16
    batch_size: int = 512
    widths_eps: float = 1.0
    ray_angle: float = 0.7
    c0: float = 2.0
    g: int = 1

    def __post_init__(self):
        if isinstance(self.experiment, str):
            object.__setattr__(self, 'experiment', ExperimentKind.parse(self.experiment))
        object.__setattr__(self, 'n_list', tuple(int(n) for n in self.n_list))
        object.__setattr__(self, 'param_grid', tuple(float(p) for p in self.param_grid))
        if self.trials < MIN_TRIALS:
            raise ConfigError(f'trials must be at least {MIN_TRIALS}, got {self.trials}')
        if not self.n_list:
            raise ConfigError('n_list must not be empty')
        if min(self.n_list) < 2:
            raise ConfigError('every n must be at least 2')
        if not self.param_grid:
            raise ConfigError('param_grid must not be empty')
        if self.threads < 1 or self.batch_size < 1:
            raise ConfigError('threads and batch_size must be positive')
        if self.grid_factor < 8:
            raise ConfigError('grid_factor must be at least 8 for the sup-norm certificate')
        if self.base_seed < 0:
            raise ConfigError('base_seed is unsigned')
        try:
            self.distribution
            self.weight
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc
        if self.experiment is ExperimentKind.ANNULUS_INF:
            if min(self.param_grid) <= 0:
                raise ConfigError('AnnulusInf needs eps > 0')
            if max(self.n_list) > ANNULUS_MAX_N:
                raise ConfigError(f'AnnulusInf is limited to n <= {ANNULUS_MAX_N}')
        if self.experiment is ExperimentKind.SN_TAIL_EPS and min(self.param_grid) < 0:
            raise ConfigError('SnTailEps needs eps >= 0')
        if self.c0 <= 0:
            raise ConfigError('c0 must be positive')
        if self.g < 1:
            raise ConfigError('g must be a positive integer')
        if self.experiment is ExperimentKind.TAYLOR_RATIO and min(self.param_grid) < 0:
            raise ConfigError('TaylorRatio needs eps >= 0')
        if self.experiment is ExperimentKind.GCIRC_TAIL_RHO:
            dense = [n for n in self.n_list if math.gcd(n, self.g) != 1 and n > GCIRC_DENSE_MAX_N]
            if dense:
                raise ConfigError(f'g={self.g} is not coprime with n={dense}; such n are limited to {GCIRC_DENSE_MAX_N}')

    @property
    def distribution(self) -> CoeffDistribution:
        return CoeffDistribution.parse(self.dist)

    @property
    def weight(self) -> WeightFn:
        return _cached_weight(self.phi)

    def to_dict(self) -> dict:
        data = asdict(self)
        data['experiment'] = self.experiment.value
        data['n_list'] = list(self.n_list)
        data['param_grid'] = list(self.param_grid)
        return data

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_dict().items():
            if isinstance(value, list):
                value = ','.join(f'{v:g}' if isinstance(v, float) else str(v) for v in value)
            lines.append(f'{key}={value}')
        return '\n'.join(lines) + '\n'


_WEIGHTS: dict[str, WeightFn] = {}


def _cached_weight(spec: str) -> WeightFn:
    # нормировка веса считается по сетке, поэтому держим готовые объекты
    if spec not in _WEIGHTS:
        _WEIGHTS[spec] = WeightFn.parse(spec)
    return _WEIGHTS[spec]


_CASTS = {
    'n_list': lambda s: tuple(int(x) for x in s.split(',') if x.strip()),
    'param_grid': lambda s: tuple(float(x) for x in s.split(',') if x.strip()),
    'trials': int,
    'base_seed': int,
    'threads': int,
    'grid_factor': int,
    'batch_size': int,
    'angle': float,
    'widths_eps': float,
    'ray_angle': float,
    'c0': float,
    'g': int,
}


def config_from_mapping(values: dict) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f'Unknown config keys: {sorted(unknown)}')
    missing = {'experiment', 'dist', 'n_list', 'param_grid', 'trials'} - set(values)
    if missing:
        raise ConfigError(f'Missing config keys: {sorted(missing)}')
    kwargs = {}
    for key, raw in values.items():
        if raw is None:
            raise ConfigError(f'Key "{key}" has no value')
        try:
            kwargs[key] = _CASTS[key](raw) if key in _CASTS else raw.strip()
        except ValueError:
            raise ConfigError(f'Cannot parse {key}={raw!r}') from None
    return ExperimentConfig(**kwargs)


def load_config(path: str) -> ExperimentConfig:
    """
    Читает плоский файл key=value (формат .env) в ExperimentConfig.

    Аргументы:
        path (str): путь к файлу конфигурации.

    Возвращает:
        ExperimentConfig: проверенная конфигурация.
    """
    if not os.path.isfile(path):
        raise ConfigError(f'Config file {path} does not exist')
    return config_from_mapping(dict(dotenv_values(path)))


def resolve_threads(threads: int | None = None) -> int | None:
    """RS_THREADS из окружения важнее флага --threads и ключа threads."""
    env_threads = os.getenv('RS_THREADS')
    if env_threads:
        try:
            threads = int(env_threads)
        except ValueError:
            raise ConfigError(f'RS_THREADS must be an integer, got {env_threads!r}') from None
    if threads is not None and threads < 1:
        raise ConfigError('threads must be positive')
    return threads


def apply_env_overrides(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentConfig:
    threads = resolve_threads(threads)
    if threads is None:
        return cfg
    return replace(cfg, threads=threads)
