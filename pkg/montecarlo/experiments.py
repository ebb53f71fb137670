import logging
import math
import operator
from dataclasses import dataclass, field

import numpy as np

from core.circulant import GCirculant, batch_smallest_singular_values, dense_svd_oracle, densify
from core.coeff_dist import DistKind, abs_mean, draw
from core.errors import InsufficientDataError, NumericalError
from core.lcd import factorize
from core.polynomial import RandomPoly, annulus_min_moduli, batch_sup_lower, weighted_coeffs
from core.rng import mix
from core.roots import annulus_stats, default_widths, find_roots, kac_expected_real_roots
from montecarlo.charfn import char_fn_product, char_weights
from montecarlo.config import ExperimentConfig, ExperimentKind
from montecarlo.estimates import TailEstimate, scaling_fit
from montecarlo.runner import BatchOutcome, batch_trials, map_batches


logger = logging.getLogger(__name__)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    estimates: list[TailEstimate]
    summary: dict
    charfn: list[dict] = field(default_factory=list)


def trial_keys(base_seed: int, n: int, trials) -> np.ndarray:
    """Зерно испытания t при размере n: mix(base_seed, n, 0, t), общее для всех порогов."""
    return mix(base_seed, n, 0, np.asarray(trials, dtype=np.int64))


def coefficient_batch(cfg: ExperimentConfig, n: int, trials, weighted: bool = True) -> np.ndarray:
    """Коэффициенты испытаний формы (len(trials), n); строка t совпадает с build_poly(seed=trial_keys(t))."""
    keys = mix(trial_keys(cfg.base_seed, n, trials)[:, None], np.arange(n, dtype=np.uint64)[None, :])
    return weighted_coeffs(cfg.distribution, cfg.weight if weighted else None, n, keys)


def is_prime(n: int) -> bool:
    return n > 1 and factorize(n) == {n: 1}


def _sweep(cfg: ExperimentConfig, n: int, statistic, thresholds: np.ndarray, event,
           grid_factor: int = 1) -> list[TailEstimate]:
    # statistic(trials) -> (b,) или (b, len(thresholds)); событие event(value, threshold)
    def batch(trials: np.ndarray) -> BatchOutcome:
        values = np.asarray(statistic(trials), dtype=np.float64).reshape(trials.size, -1)
        hits = np.sum(event(values, thresholds[None, :]), axis=0)
        return BatchOutcome(hits.astype(np.int64))

    per_batch = batch_trials(cfg.batch_size, n, grid_factor)
    outcome = map_batches(batch, cfg.trials, per_batch, cfg.threads)
    return [
        TailEstimate.from_counts(n, param, int(hits), cfg.trials, idx)
        for idx, (param, hits) in enumerate(zip(cfg.param_grid, outcome.hits))
    ]


def _params(cfg: ExperimentConfig) -> np.ndarray:
    return np.asarray(cfg.param_grid, dtype=np.float64)


def run_sn_tail_eps(cfg: ExperimentConfig) -> list[TailEstimate]:
    """Pr(s_min(circ(X)) <= eps n^{-1/2}) для каждой пары (n, eps)."""
    out = []
    for n in cfg.n_list:
        stat = lambda trials, n=n: batch_smallest_singular_values(coefficient_batch(cfg, n, trials, weighted=False))
        out += _sweep(cfg, n, stat, _params(cfg) / math.sqrt(n), operator.le)
    return out


def run_sn_tail_rho(cfg: ExperimentConfig) -> list[TailEstimate]:
    """Pr(s_min(circ(X)) <= n^{-rho}); простота n отмечается в выводе."""
    out = []
    for n in cfg.n_list:
        stat = lambda trials, n=n: batch_smallest_singular_values(coefficient_batch(cfg, n, trials, weighted=False))
        out += _sweep(cfg, n, stat, float(n) ** -_params(cfg), operator.le)
    return out


def run_annulus_inf(cfg: ExperimentConfig) -> list[TailEstimate]:
    """
    Pr(inf по кольцу ||z|-1| < eps n^{-2} от |G| меньше eps n^{-1/2}).

    Все eps считаются на общей сетке окружности, поэтому оценки монотонны по eps точно.
    """
    out = []
    eps = _params(cfg)
    for n in cfg.n_list:
        def stat(trials, n=n):
            coeffs = coefficient_batch(cfg, n, trials).astype(np.complex128)
            return np.stack([annulus_min_moduli(RandomPoly(n, row), eps) for row in coeffs])

        out += _sweep(cfg, n, stat, eps / math.sqrt(n), operator.lt)
    return out


def salem_zygmund_scale(cfg: ExperimentConfig, n: int) -> float:
    """r_n = sum_j phi(j/n)^2 точно."""
    return float(np.sum(cfg.weight(np.arange(n) / n) ** 2))


def run_salem_zygmund(cfg: ExperimentConfig) -> list[TailEstimate]:
    """Сертифицированная нижняя оценка ||T_n|| >= C0 sqrt(r_n log n)."""
    out = []
    for n in cfg.n_list:
        grid = cfg.grid_factor * n
        stat = lambda trials, n=n, grid=grid: batch_sup_lower(coefficient_batch(cfg, n, trials), grid)
        scale = math.sqrt(salem_zygmund_scale(cfg, n) * math.log(n))
        out += _sweep(cfg, n, stat, _params(cfg) * scale, operator.ge, cfg.grid_factor)
    return out


def run_deriv_sup(cfg: ExperimentConfig) -> list[TailEstimate]:
    """Сертифицированная нижняя оценка ||T'_n|| >= C0 n^{3/2} (log n)^{1/2}."""
    out = []
    for n in cfg.n_list:
        grid = cfg.grid_factor * n
        j = np.arange(n)

        def stat(trials, n=n, grid=grid, j=j):
            return batch_sup_lower(1j * j * coefficient_batch(cfg, n, trials), grid)

        out += _sweep(cfg, n, stat, _params(cfg) * n ** 1.5 * math.sqrt(math.log(n)), operator.ge, cfg.grid_factor)
    return out


def second_derivative_weights(n: int) -> np.ndarray:
    j = np.arange(n, dtype=np.float64)
    return j * (j - 1.0) * (1.0 + n ** -2.0) ** np.maximum(j - 2.0, 0.0)


def run_second_deriv(cfg: ExperimentConfig) -> list[TailEstimate]:
    """Мажоранта sum j(j-1)|c_j|(1+n^{-2})^{j-2} против C n^{13/4}."""
    out = []
    for n in cfg.n_list:
        weights = second_derivative_weights(n)
        stat = lambda trials, n=n, w=weights: np.abs(coefficient_batch(cfg, n, trials)) @ w
        out += _sweep(cfg, n, stat, _params(cfg) * n ** 3.25, operator.gt)
    return out


def run_small_ball(cfg: ExperimentConfig) -> list[TailEstimate]:
    """Pr(|T_n(x)| < t sqrt n) в фиксированной точке x = cfg.angle."""
    out = []
    for n in cfg.n_list:
        phases = np.exp(1j * np.arange(n) * cfg.angle)
        stat = lambda trials, n=n, ph=phases: np.abs(coefficient_batch(cfg, n, trials) @ ph)
        out += _sweep(cfg, n, stat, _params(cfg) * math.sqrt(n), operator.lt)
    return out


def taylor_ratio_scale(n: int) -> float:
    return n ** 1.5 * math.sqrt(math.log(n))


def run_taylor_ratio(cfg: ExperimentConfig) -> list[TailEstimate]:
    """
    Pr(|T_n(x)| <= 4 eps n^{-2} |T'_n(x)| и ||T'_n|| <= c0 n^{3/2} (log n)^{1/2}) в точке x = cfg.angle.

    Условие на ||T'_n|| проверяется по сертифицированной нижней оценке, поэтому
    частота событий оценивает вероятность сверху.
    """
    out = []
    for n in cfg.n_list:
        grid = cfg.grid_factor * n
        j = np.arange(n)
        phases = np.exp(1j * j * cfg.angle)
        cap = cfg.c0 * taylor_ratio_scale(n)

        def stat(trials, n=n, grid=grid, j=j, phases=phases, cap=cap):
            coeffs = coefficient_batch(cfg, n, trials)
            deriv = 1j * j * coeffs
            value = np.abs(coeffs @ phases)
            slope = np.abs(deriv @ phases)
            with np.errstate(divide='ignore', invalid='ignore'):
                ratio = np.where(value == 0, 0.0, n * n * value / (4.0 * slope))
            return np.where(batch_sup_lower(deriv, grid) <= cap, ratio, np.inf)

        out += _sweep(cfg, n, stat, _params(cfg), operator.le, cfg.grid_factor)
    return out


def _gcirc_smallest(cfg: ExperimentConfig, n: int, g: int):
    def stat(trials):
        rows = coefficient_batch(cfg, n, trials, weighted=False)
        if math.gcd(n, g) == 1:
            # Q^g унитарна, s_min(C^g) = s_min(C)
            return batch_smallest_singular_values(rows)
        return np.array([dense_svd_oracle(densify(GCirculant(row, g)))[-1] for row in rows])

    return stat


def run_gcirc_tail_rho(cfg: ExperimentConfig) -> list[TailEstimate]:
    """Pr(s_min(C^g) <= n^{-rho}) для g-циркулянта с первой строкой испытания."""
    out = []
    for n in cfg.n_list:
        g = cfg.g % n or n
        out += _sweep(cfg, n, _gcirc_smallest(cfg, n, g), float(n) ** -_params(cfg), operator.le)
    return out


def _root_batch(cfg: ExperimentConfig, n: int, thresholds: np.ndarray):
    widths = default_widths(n, cfg.widths_eps)

    def batch(trials: np.ndarray) -> BatchOutcome:
        coeffs = coefficient_batch(cfg, n, trials)
        hits = np.zeros(thresholds.size, dtype=np.int64)
        extras = []
        for trial, row in zip(trials, coeffs):
            rs = find_roots(row)
            if not rs.converged:
                raise NumericalError(f'root finder did not converge (n={n}, trial={int(trial)})')
            stats = annulus_stats(rs, n, widths)
            hits += stats.min_scaled_dist <= thresholds
            extras.append(stats)
        return BatchOutcome(hits, extras)

    return batch


def run_root_stats(cfg: ExperimentConfig) -> tuple[list[TailEstimate], dict]:
    """Pr(n^2 min||z|-1| <= c) и сводка по кольцевой статистике корней."""
    out, per_n = [], {}
    thresholds = _params(cfg)
    for n in cfg.n_list:
        outcome = map_batches(_root_batch(cfg, n, thresholds), cfg.trials, batch_trials(cfg.batch_size, n), cfg.threads)
        out += [
            TailEstimate.from_counts(n, param, int(hits), cfg.trials, idx)
            for idx, (param, hits) in enumerate(zip(cfg.param_grid, outcome.hits))
        ]
        stats = outcome.extras
        widths = list(stats[0].frac_within)
        per_n[str(n)] = {
            'median_frac_within': {f'{w:.6g}': float(np.median([s.frac_within[w] for s in stats])) for w in widths},
            'min_frac_within': {f'{w:.6g}': min(s.frac_within[w] for s in stats) for w in widths},
            'mean_ks_uniform': float(np.mean([s.ks_uniform for s in stats])),
            'max_ks_uniform': float(np.max([s.ks_uniform for s in stats])),
            'mean_real_roots': float(np.mean([s.real_roots for s in stats])),
            'kac_expected_real_roots': kac_expected_real_roots(n - 1),
        }
    return out, per_n


def run_char_fn(cfg: ExperimentConfig) -> list[dict]:
    """
    Точное произведение prod E cos(pi xi psi_j) на луче |s| из param_grid
    рядом с оценкой Монте-Карло E cos(pi sum xi_j psi_j).
    """
    rows = []
    direction = (math.cos(cfg.ray_angle), math.sin(cfg.ray_angle))
    for n in cfg.n_list:
        points = [(r * direction[0], r * direction[1]) for r in cfg.param_grid]
        psi = np.stack([char_weights(cfg.weight, n, cfg.angle, s) for s in points])

        def batch(trials: np.ndarray, n=n, psi=psi) -> BatchOutcome:
            keys = mix(trial_keys(cfg.base_seed, n, trials)[:, None], np.arange(n, dtype=np.uint64)[None, :])
            xi = draw(cfg.distribution, keys)
            return BatchOutcome(np.sum(np.cos(math.pi * (xi @ psi.T)), axis=0))

        outcome = map_batches(batch, cfg.trials, batch_trials(cfg.batch_size, n), cfg.threads)
        for radius, s, total in zip(cfg.param_grid, points, outcome.hits):
            rows.append({
                'n': n,
                'radius': radius,
                's1': s[0],
                's2': s[1],
                'exact': char_fn_product(cfg.distribution, cfg.weight, n, cfg.angle, s),
                'monte_carlo': float(total) / cfg.trials,
                'trials': cfg.trials,
            })
    return rows


def _fit_or_none(points) -> dict | None:
    try:
        return scaling_fit(points)._asdict()
    except InsufficientDataError:
        return None


def _by_n(estimates: list[TailEstimate]) -> dict[int, list[TailEstimate]]:
    groups: dict[int, list[TailEstimate]] = {}
    for est in estimates:
        groups.setdefault(est.n, []).append(est)
    return groups


def summarize(cfg: ExperimentConfig, estimates: list[TailEstimate], extra: dict | None = None) -> dict:
    """Сводка для summary.json: наклоны, предсказания границ и метаданные эксперимента."""
    kind = cfg.experiment
    summary = {
        'experiment': kind.value,
        'dist': cfg.distribution.spec,
        'phi': cfg.weight.spec,
        'phi_in_proof_range': cfg.weight.in_proof_range,
        'base_seed': cfg.base_seed,
        'trials': cfg.trials,
        'prime_n': {str(n): is_prime(n) for n in cfg.n_list},
    }
    groups = _by_n(estimates)
    if kind in (ExperimentKind.SN_TAIL_EPS, ExperimentKind.ANNULUS_INF, ExperimentKind.SMALL_BALL,
                ExperimentKind.TAYLOR_RATIO):
        summary['slopes'] = {str(n): _fit_or_none((e.param, e.p_hat) for e in group) for n, group in groups.items()}
        summary['max_ratio'] = {
            str(n): max((e.p_hat / e.param for e in group if e.param > 0), default=None)
            for n, group in groups.items()
        }
    if kind is ExperimentKind.TAYLOR_RATIO:
        summary['deriv_cap'] = {str(n): cfg.c0 * taylor_ratio_scale(n) for n in cfg.n_list}
    if kind is ExperimentKind.GCIRC_TAIL_RHO:
        summary['g'] = {str(n): cfg.g % n or n for n in cfg.n_list}
        summary['coprime_g'] = {str(n): math.gcd(n, cfg.g) == 1 for n in cfg.n_list}
    if kind in (ExperimentKind.SN_TAIL_RHO, ExperimentKind.GCIRC_TAIL_RHO):
        summary['delta'] = {f'{rho:g}': min(rho, 0.1) for rho in cfg.param_grid}
        summary['decay_slopes'] = {
            f'{rho:g}': _fit_or_none((e.n, e.p_hat) for e in estimates if e.param_index == idx)
            for idx, rho in enumerate(cfg.param_grid)
        }
    if kind is ExperimentKind.SALEM_ZYGMUND:
        summary['r_n'] = {str(n): salem_zygmund_scale(cfg, n) for n in cfg.n_list}
        summary['bound'] = {str(n): 8.0 * math.pi / n ** 2 for n in cfg.n_list}
    if kind is ExperimentKind.SECOND_DERIV:
        mean_abs = abs_mean(cfg.distribution)
        summary['markov_prediction'] = {
            str(n): {
                f'{c:g}': min(1.0, mean_abs * float(np.sum(second_derivative_weights(n) * cfg.weight(np.arange(n) / n)))
                              / (c * n ** 3.25))
                for c in cfg.param_grid
            }
            for n in cfg.n_list
        }
        summary['rate_times_n_quarter'] = {
            str(n): max(e.p_hat for e in group) * n ** 0.25 for n, group in groups.items()
        }
    if kind is ExperimentKind.ROOT_STATS and cfg.distribution.kind is not DistKind.GAUSSIAN:
        # формула Каца верна только для гауссовых коэффициентов
        for stats in (extra or {}).values():
            stats.pop('kac_expected_real_roots', None)
    if extra:
        summary['roots' if kind is ExperimentKind.ROOT_STATS else 'extra'] = extra
    return summary


_TAIL_RUNNERS = {
    ExperimentKind.SN_TAIL_EPS: run_sn_tail_eps,
    ExperimentKind.SN_TAIL_RHO: run_sn_tail_rho,
    ExperimentKind.ANNULUS_INF: run_annulus_inf,
    ExperimentKind.SALEM_ZYGMUND: run_salem_zygmund,
    ExperimentKind.DERIV_SUP: run_deriv_sup,
    ExperimentKind.SECOND_DERIV: run_second_deriv,
    ExperimentKind.SMALL_BALL: run_small_ball,
    ExperimentKind.TAYLOR_RATIO: run_taylor_ratio,
    ExperimentKind.GCIRC_TAIL_RHO: run_gcirc_tail_rho,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Запускает эксперимент из конфигурации.

    Аргументы:
        cfg (ExperimentConfig): проверенная конфигурация.

    Возвращает:
        ExperimentResult: оценки, сводка и (для CharFn) точки характеристической функции.
    """
    logger.info('Running %s: dist=%s phi=%s n=%s trials=%d threads=%d', cfg.experiment.value,
                cfg.distribution.spec, cfg.weight.spec, list(cfg.n_list), cfg.trials, cfg.threads)
    if cfg.experiment is ExperimentKind.ROOT_STATS:
        estimates, per_n = run_root_stats(cfg)
        return ExperimentResult(cfg, estimates, summarize(cfg, estimates, per_n))
    if cfg.experiment is ExperimentKind.CHAR_FN:
        rows = run_char_fn(cfg)
        summary = summarize(cfg, [])
        summary['max_abs_gap'] = max(abs(r['exact'] - r['monte_carlo']) for r in rows)
        return ExperimentResult(cfg, [], summary, rows)
    estimates = _TAIL_RUNNERS[cfg.experiment](cfg)
    return ExperimentResult(cfg, estimates, summarize(cfg, estimates))
