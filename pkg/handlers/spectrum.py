import logging

import numpy as np

from core.circulant import Circulant, GCirculant, SpectralSummary, extreme_singular_values, gcirc_spectral
from core.coeff_dist import CoeffDistribution
from core.errors import InputError
from core.polynomial import weighted_coeffs
from core.rng import mix
from montecarlo.experiments import trial_keys
from montecarlo.output import write_rows_csv


logger = logging.getLogger(__name__)


def _parse_row(text: str) -> np.ndarray:
    try:
        values = [complex(v.strip().replace(' ', '')) for v in text.split(',') if v.strip()]
    except ValueError:
        raise InputError(f'Cannot parse --row "{text}"') from None
    row = np.array(values)
    return row.real if np.all(row.imag == 0) else row


def _random_row(dist: CoeffDistribution, n: int, seed: int) -> np.ndarray:
    return weighted_coeffs(dist, None, n, mix(seed, np.arange(n, dtype=np.uint64)))


def _summary(row: np.ndarray, g: int) -> SpectralSummary:
    if g == 1:
        return extreme_singular_values(Circulant(row))
    return gcirc_spectral(GCirculant(row, g))


def _line(summary: SpectralSummary, prefix: str = '') -> str:
    argmin = '-' if summary.argmin is None else summary.argmin
    return (f'{prefix}s_min={summary.s_min:.17g} s_max={summary.s_max:.17g} '
            f'argmin={argmin} singular={int(summary.numerically_singular)}')


async def cmd_spectrum(args, session=None) -> int:
    """Крайние сингулярные числа (g-)циркулянта по первой строке."""
    if args.row is not None:
        rows = [_parse_row(args.row)]
        if args.n is not None and args.n != rows[0].size:
            raise InputError(f'--n {args.n} does not match the {rows[0].size} entries of --row')
    else:
        dist = CoeffDistribution.parse(args.dist)
        if args.trials == 1:
            rows = [_random_row(dist, args.n, args.seed)]
        else:
            seeds = trial_keys(args.seed, args.n, np.arange(args.trials))
            rows = [_random_row(dist, args.n, int(key)) for key in seeds]

    summaries = [_summary(row, args.g) for row in rows]
    for idx, summary in enumerate(summaries):
        print(_line(summary, f'trial={idx} ' if len(summaries) > 1 else ''))
        if summary.numerically_singular:
            logger.warning('Matrix is numerically singular (trial %d)', idx)

    if args.csv:
        records = [
            {'trial': idx, 'k': k, 're': z.real, 'im': z.imag, 'modulus': abs(z)}
            for idx, summary in enumerate(summaries)
            for k, z in enumerate(summary.eigenvalues)
        ]
        write_rows_csv(args.csv, ['trial', 'k', 're', 'im', 'modulus'], records)
        logger.info('Eigenvalues written to %s', args.csv)
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser('spectrum', parents=parents, help='smallest/largest singular value of a circulant')
    source = parser.add_mutually_exclusive_group()
    source.add_argument('--dist', default=None, help='coefficient law, e.g. rademacher, uniform:a=1')
    source.add_argument('--row', default=None, help='explicit first row, comma-separated')
    parser.add_argument('--n', type=int, default=None)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--g', type=int, default=1, help='g of a g-circulant')
    parser.add_argument('--trials', type=int, default=1)
    parser.add_argument('--csv', default=None, help='write eigenvalues to this CSV')
    parser.set_defaults(handler=cmd_spectrum, validate=_validate, command_parser=parser)


def _validate(parser, args) -> None:
    if args.row is None:
        if args.n is None:
            parser.error('--n is required unless --row is given')
        if args.n < 1:
            parser.error('--n must be positive')
        if args.dist is None:
            args.dist = 'rademacher'
    if args.trials < 1:
        parser.error('--trials must be positive')
    if args.g < 1:
        parser.error('--g must be positive')
