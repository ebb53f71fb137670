import asyncio
import json
import logging
from pathlib import Path

from common.defaults import EXIT_OK, EXIT_PILOT_REGRESSION, THRESHOLDS_PATH, VERSION
from database.orm_query import orm_estimates_add_all, orm_run_add, orm_run_finish
from handlers.manifest import RunManifest, utc_now
from montecarlo.config import apply_env_overrides, load_config
from montecarlo.experiments import ExperimentResult, is_prime, run_experiment
from montecarlo.output import estimate_rows, file_sha256, write_charfn_csv, write_json, write_results_csv
from montecarlo.pilot import load_thresholds, pilot_checks
from utils.plotmaker import get_tail_plot


logger = logging.getLogger(__name__)

PARAM_LABELS = {
    'SnTailEps': 'eps',
    'SnTailRho': 'rho',
    'AnnulusInf': 'eps',
    'SalemZygmund': 'C0',
    'DerivSup': 'C0',
    'SecondDeriv': 'C',
    'SmallBall': 't',
    'RootStats': 'c',
    'TaylorRatio': 'eps',
    'GCircTailRho': 'rho',
}


def _plot(result: ExperimentResult, path: Path) -> Path:
    curves, fits = {}, {}
    for est in result.estimates:
        curves.setdefault(str(est.n), []).append(est)
    slopes = result.summary.get('slopes', {})
    for label in curves:
        fits[label] = slopes.get(label)
    kind = result.config.experiment.value
    return get_tail_plot(path, curves, fits, xlabel=PARAM_LABELS.get(kind, 'param'), title=kind)


async def cmd_experiment(args, session=None) -> int:
    """Эксперимент из файла конфигурации: results.csv, summary.json, manifest.json."""
    cfg = apply_env_overrides(load_config(args.config), args.threads)
    thresholds, thresholds_hash = None, None
    if args.assert_pilot:
        thresholds = load_thresholds(args.thresholds)
        thresholds_hash = file_sha256(args.thresholds)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest('experiment', cfg.to_dict(), thresholds_hash=thresholds_hash)

    run_id = None
    if session is not None:
        run_id = await orm_run_add(session, data={
            'command': 'experiment',
            'config': json.dumps(cfg.to_dict(), sort_keys=True),
            'version': VERSION,
            'out_dir': str(out_dir),
            'thresholds_hash': thresholds_hash,
            'started': manifest.started,
        })

    result = await asyncio.to_thread(run_experiment, cfg)

    rows = estimate_rows(cfg, result.estimates, {n: is_prime(n) for n in cfg.n_list})
    manifest.add_output(write_results_csv(out_dir / 'results.csv', rows))
    summary = dict(result.summary)
    summary['pilot_thresholds'] = None if thresholds is None else {
        'path': str(args.thresholds), 'sha256': thresholds_hash, 'suites': thresholds.get('suites', {}),
    }
    manifest.add_output(write_json(out_dir / 'summary.json', summary))
    if result.charfn:
        manifest.add_output(write_charfn_csv(out_dir / 'charfn.csv', result.charfn))
    if args.plot and result.estimates:
        manifest.add_output(_plot(result, out_dir / 'tail.svg'))
    manifest.write(out_dir)

    if session is not None:
        await orm_estimates_add_all(session, run_id, rows)
        await orm_run_finish(session, run_id, manifest.finished or utc_now())

    print(f'experiment={cfg.experiment.value} rows={len(rows)} out={out_dir}')
    if thresholds is not None:
        failures = pilot_checks(thresholds, result)
        if failures:
            for message in failures:
                print(f'pilot regression: {message}')
            return EXIT_PILOT_REGRESSION
    return EXIT_OK


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser('experiment', parents=parents, help='run a Monte Carlo experiment')
    parser.add_argument('--config', required=True, help='flat key=value experiment file')
    parser.add_argument('--out', default='results', help='output directory')
    parser.add_argument('--plot', action='store_true', help='write tail.svg')
    parser.add_argument('--threads', type=int, default=None)
    parser.add_argument('--assert-pilot', action='store_true', help='compare against pinned pilot thresholds')
    parser.add_argument('--thresholds', default=str(THRESHOLDS_PATH))
    parser.set_defaults(handler=cmd_experiment, command_parser=parser)
