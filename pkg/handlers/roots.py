import logging
from dataclasses import asdict
from pathlib import Path

import numpy as np

from common.defaults import builtin_polys, roots_columns
from core.coeff_dist import CoeffDistribution, DistKind
from core.errors import InputError, NumericalError
from core.polynomial import RandomPoly, WeightFn, build_poly
from core.roots import annulus_stats, default_widths, find_roots, kac_expected_real_roots
from montecarlo.output import write_json, write_rows_csv
from utils.plotmaker import get_roots_plot


logger = logging.getLogger(__name__)


def _parse_widths(text: str) -> list[float]:
    try:
        widths = [float(w) for w in text.split(',') if w.strip()]
    except ValueError:
        raise InputError(f'Cannot parse --widths "{text}"') from None
    if not widths or min(widths) <= 0:
        raise InputError('--widths must be positive numbers')
    return widths


def _polynomial(args) -> RandomPoly:
    if args.poly is not None:
        return RandomPoly.from_coeffs(builtin_polys[args.poly], tag=args.poly)
    dist = CoeffDistribution.parse(args.dist)
    return build_poly(dist, WeightFn.parse(args.phi), args.n, args.seed)


async def cmd_roots(args, session=None) -> int:
    """Корни многочлена, CSV корней и JSON кольцевой статистики."""
    poly = _polynomial(args)
    n = poly.n
    widths = _parse_widths(args.widths) if args.widths else default_widths(n, args.widths_eps)

    rs = find_roots(poly)
    if not rs.converged:
        raise NumericalError(f'root finder did not converge in {rs.iterations} iterations')
    stats = annulus_stats(rs, n, widths)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = [
        {'re': z.real, 'im': z.imag, 'abs_minus_one': abs(z) - 1.0, 'arg': float(np.mod(np.angle(z), 2 * np.pi))}
        for z in rs.roots
    ]
    write_rows_csv(out_dir / 'roots.csv', roots_columns, rows)

    report = asdict(stats)
    report['frac_within'] = {f'{w:.6g}': frac for w, frac in stats.frac_within.items()}
    report.update(
        poly=poly.dist_tag,
        phi=poly.weight_tag or None,
        seed=poly.seed,
        iterations=rs.iterations,
        max_residual=float(rs.residuals.max()),
    )
    if args.poly is None and CoeffDistribution.parse(args.dist).kind is DistKind.GAUSSIAN:
        report['kac_expected_real_roots'] = kac_expected_real_roots(n - 1)
    write_json(out_dir / 'annulus.json', report)

    if args.plot:
        get_roots_plot(out_dir / 'roots.svg', rs.roots, widths, title=f'n={n}')
        logger.info('Root plot written to %s', out_dir / 'roots.svg')

    print(f'n={n} roots={rs.roots.size} min_scaled_dist={stats.min_scaled_dist:.6g} '
          f'ks_uniform={stats.ks_uniform:.6g} real_roots={stats.real_roots}')
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser('roots', parents=parents, help='roots of a random or builtin polynomial')
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--n', type=int, help='number of coefficients (degree n-1)')
    source.add_argument('--poly', choices=sorted(builtin_polys), help='builtin test polynomial')
    parser.add_argument('--dist', default='gaussian')
    parser.add_argument('--phi', default='const')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--widths', default=None, help='comma-separated annulus half-widths')
    parser.add_argument('--widths-eps', type=float, default=1.0, help='eps of the default n^-2 widths')
    parser.add_argument('--plot', action='store_true', help='write roots.svg')
    parser.add_argument('--out', default='.', help='output directory')
    parser.set_defaults(handler=cmd_roots, validate=_validate, command_parser=parser)


def _validate(parser, args) -> None:
    if args.n is not None and args.n < 2:
        parser.error('--n must be at least 2')
