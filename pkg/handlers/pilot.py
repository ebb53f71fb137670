import asyncio
import json
import logging

from common.defaults import THRESHOLDS_PATH, VERSION
from database.orm_query import orm_run_add, orm_run_finish
from handlers.manifest import utc_now
from montecarlo.config import resolve_threads
from montecarlo.output import write_json
from montecarlo.pilot import SUITES, run_pilot, suite_names


logger = logging.getLogger(__name__)


async def cmd_pilot(args, session=None) -> int:
    """Пилотные прогоны и замороженный thresholds.json."""
    suite_names(args.suite)
    started = utc_now()
    run_id = None
    if session is not None:
        run_id = await orm_run_add(session, data={
            'command': 'pilot',
            'config': json.dumps({'suite': args.suite, 'trials': args.trials, 'seed': args.seed}, sort_keys=True),
            'version': VERSION,
            'out_dir': str(args.out),
            'started': started,
        })

    threads = resolve_threads(args.threads)
    document = await asyncio.to_thread(run_pilot, args.suite, args.trials, args.seed, threads)
    path = write_json(args.out, document)
    logger.info('Pilot thresholds written to %s', path)

    if session is not None:
        await orm_run_finish(session, run_id, utc_now())
    print(f'suites={",".join(document["suites"])} out={path}')
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser('pilot', parents=parents, help='pin acceptance thresholds')
    parser.add_argument('--suite', required=True, help=f'one of: all, {", ".join(SUITES)}')
    parser.add_argument('--trials', type=int, default=10_000)
    parser.add_argument('--seed', type=int, default=1)
    parser.add_argument('--threads', type=int, default=1)
    parser.add_argument('--out', default=str(THRESHOLDS_PATH))
    parser.set_defaults(handler=cmd_pilot, command_parser=parser)
