import json
import logging
from pathlib import Path

import numpy as np

from common.defaults import VERSION
from core.errors import ConfigError, PilotDataError
from montecarlo.config import ExperimentConfig, ExperimentKind
from montecarlo.experiments import ExperimentResult, run_experiment


logger = logging.getLogger(__name__)

ROOTS_TRIALS_CAP = 1000
SMALL_BALL_GRID = tuple(float(t) for t in np.geomspace(0.01, 0.1, 5))

SUITES = {
    'sn_tail': dict(experiment=ExperimentKind.SN_TAIL_EPS, dist='rademacher',
                       n_list=(256,), param_grid=(0.1, 0.2, 0.4, 0.8)),
    'sn_decay': dict(experiment=ExperimentKind.SN_TAIL_RHO, dist='rademacher',
                     n_list=(127, 251, 509), param_grid=(0.3,)),
    'annulus': dict(experiment=ExperimentKind.ANNULUS_INF, dist='gaussian',
                     n_list=(128,), param_grid=(0.25, 0.5, 1.0)),
    'salem_zygmund': dict(experiment=ExperimentKind.SALEM_ZYGMUND, dist='rademacher',
                          n_list=(256,), param_grid=(6.0,)),
    'second_deriv': dict(experiment=ExperimentKind.SECOND_DERIV, dist='gaussian',
                         n_list=(64,), param_grid=(1.0,)),
    'small_ball': dict(experiment=ExperimentKind.SMALL_BALL, dist='rademacher',
                       n_list=(256,), param_grid=SMALL_BALL_GRID),
    'roots': dict(experiment=ExperimentKind.ROOT_STATS, dist='gaussian',
                  n_list=(256,), param_grid=(0.5, 1.0, 2.0, 4.0)),
    'taylor_ratio': dict(experiment=ExperimentKind.TAYLOR_RATIO, dist='gaussian',
                         n_list=(128,), param_grid=(2.0, 4.0, 8.0)),
    'gcirc_decay': dict(experiment=ExperimentKind.GCIRC_TAIL_RHO, dist='rademacher', g=2,
                        n_list=(127, 251, 509), param_grid=(0.3,)),
}

_SUITE_OF = {spec['experiment']: name for name, spec in SUITES.items()}


def suite_names(suite: str) -> tuple[str, ...]:
    if suite == 'all':
        return tuple(SUITES)
    if suite not in SUITES:
        raise ConfigError(f'Unknown pilot suite "{suite}"; choose from {["all", *SUITES]}')
    return (suite,)


def suite_config(name: str, trials: int, seed: int, threads: int = 1) -> ExperimentConfig:
    if name == 'roots':
        trials = min(trials, ROOTS_TRIALS_CAP)
    return ExperimentConfig(trials=trials, base_seed=seed, threads=threads, **SUITES[name])


def derive_thresholds(name: str, result: ExperimentResult) -> dict:
    """Замороженные значения, с которыми потом сравниваются основные прогоны."""
    est = result.estimates
    summary = result.summary
    if name == 'sn_tail':
        slope = summary['slopes'][str(est[0].n)]
        return {
            'n': est[0].n,
            'p_hat': {f'{e.param:g}': e.p_hat for e in est},
            'ratio_max': max(e.p_hat / e.param for e in est),
            'slope': None if slope is None else slope['slope'],
        }
    if name in ('sn_decay', 'gcirc_decay'):
        return {
            'p_hat': {str(e.n): e.p_hat for e in est},
            'half_width': {str(e.n): e.half_width for e in est},
        }
    if name == 'annulus':
        return {'ratio': {f'{e.param:g}': e.p_hat / e.param for e in est}}
    if name == 'salem_zygmund':
        return {'violations': sum(e.hits for e in est), 'bound': summary['bound']}
    if name == 'second_deriv':
        return {'rate': {str(e.n): e.p_hat for e in est}, 'c_fit': {str(e.n): e.p_hat * e.n ** 0.25 for e in est}}
    if name == 'small_ball':
        return {'slope': {n: None if fit is None else fit['slope'] for n, fit in summary['slopes'].items()}}
    if name == 'taylor_ratio':
        return {
            'p_hat': {f'{e.param:g}': e.p_hat for e in est},
            'half_width': {f'{e.param:g}': e.half_width for e in est},
        }
    roots = summary['roots']
    return {
        'max_ks_uniform': {n: stats['max_ks_uniform'] for n, stats in roots.items()},
        'min_frac_within': {n: stats['min_frac_within'] for n, stats in roots.items()},
    }


def run_pilot(suite: str, trials: int, seed: int, threads: int = 1) -> dict:
    """
    Прогоняет наборы пилота и собирает документ порогов.

    Аргументы:
        suite (str): имя набора или "all".
        trials (int): число испытаний на набор.
        seed (int): базовое зерно.
        threads (int): потоки; на результат не влияют.

    Возвращает:
        dict: документ thresholds.json без меток времени.
    """
    suites = {}
    for name in suite_names(suite):
        logger.info('Pilot suite %s', name)
        result = run_experiment(suite_config(name, trials, seed, threads))
        suites[name] = derive_thresholds(name, result)
    return {'version': VERSION, 'trials': trials, 'seed': seed, 'suites': suites}


def load_thresholds(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise PilotDataError(f'Pilot thresholds {path} not found; run the pilot command first')
    return json.loads(path.read_text(encoding='utf-8'))


def _within_factor(value: float, pinned: float, factor: float = 2.0) -> bool:
    if pinned <= 0:
        return value <= 0
    return pinned / factor <= value <= pinned * factor


def pilot_checks(thresholds: dict, result: ExperimentResult) -> list[str]:
    """
    Сравнивает прогон с замороженными порогами пилота.

    Возвращает:
        list[str]: описания нарушений; пустой список, если все в порядке или набор не закреплен.
    """
    name = _SUITE_OF.get(result.config.experiment)
    pinned = thresholds.get('suites', {}).get(name) if name else None
    if pinned is None:
        return []
    failures = []
    est = result.estimates
    if name == 'sn_tail':
        ratio = max(e.p_hat / e.param for e in est if e.param > 0)
        if not _within_factor(ratio, pinned['ratio_max']):
            failures.append(f'max p_hat/eps = {ratio:.4g} is not within x2 of {pinned["ratio_max"]:.4g}')
    elif name == 'annulus':
        for e in est:
            key = f'{e.param:g}'
            if key in pinned['ratio'] and not _within_factor(e.p_hat / e.param, pinned['ratio'][key]):
                failures.append(f'eps={key}: p_hat/eps = {e.p_hat / e.param:.4g} vs pinned {pinned["ratio"][key]:.4g}')
    elif name in ('sn_decay', 'gcirc_decay', 'taylor_ratio'):
        for e in est:
            key = f'{e.param:g}' if name == 'taylor_ratio' else str(e.n)
            if key in pinned['p_hat'] and e.p_hat > pinned['p_hat'][key] + 3.0 * e.half_width:
                failures.append(f'{key}: p_hat = {e.p_hat:.4g} exceeds pinned {pinned["p_hat"][key]:.4g}')
    elif name == 'salem_zygmund':
        violations = sum(e.hits for e in est)
        if violations > pinned['violations']:
            failures.append(f'{violations} certified violations, pilot saw {pinned["violations"]}')
    elif name == 'second_deriv':
        for e in est:
            key = str(e.n)
            if key in pinned['c_fit']:
                allowed = 2.0 * pinned['c_fit'][key] * e.n ** -0.25 + 3.0 * e.half_width
                if e.p_hat > allowed:
                    failures.append(f'n={key}: rate {e.p_hat:.4g} above {allowed:.4g}')
    elif name == 'small_ball':
        for n, fit in result.summary['slopes'].items():
            target = pinned['slope'].get(n)
            if fit is not None and target is not None and abs(fit['slope'] - target) > 0.3:
                failures.append(f'n={n}: slope {fit["slope"]:.3f} vs pinned {target:.3f}')
    elif name == 'roots':
        for n, stats in result.summary['roots'].items():
            target = pinned['max_ks_uniform'].get(n)
            if target is not None and stats['mean_ks_uniform'] > target:
                failures.append(f'n={n}: mean KS {stats["mean_ks_uniform"]:.4f} above pilot max {target:.4f}')
    for message in failures:
        logger.warning('Pilot regression: %s', message)
    return failures
