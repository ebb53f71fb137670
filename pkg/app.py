import argparse
import asyncio
import logging
import os
import sys

from dotenv import find_dotenv, load_dotenv
load_dotenv(find_dotenv(usecwd=True))

from rich.console import Console
from rich.logging import RichHandler

from common.defaults import EXIT_MISSING_PILOT, EXIT_NUMERICAL, EXIT_USAGE, VERSION
from core.errors import (
    CertificationError,
    CircrootsError,
    InsufficientDataError,
    NumericalError,
    PilotDataError,
    ResolutionError,
)
from database.engine import create_db, database_url, make_engine, make_session_maker
from handlers import experiment, pilot, roots, spectrum
from middlewares.db import DataBaseSession


logger = logging.getLogger('circroots')

NUMERICAL_ERRORS = (NumericalError, ResolutionError, InsufficientDataError, CertificationError)


def setup_logging() -> None:
    level = os.getenv('RS_LOG_LEVEL', 'INFO').upper()
    logging.basicConfig(
        level=level,
        format='%(message)s',
        datefmt='[%X]',
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--no-db', action='store_true', help='do not persist the run')

    parser = argparse.ArgumentParser(prog='circroots', description='Random polynomials and circulant matrices')
    parser.add_argument('--version', action='version', version=VERSION)
    subparsers = parser.add_subparsers(dest='command', required=True)
    for module in (spectrum, roots, experiment, pilot):
        module.register(subparsers, [common])
    return parser


async def _dispatch(args, data: dict) -> int:
    return await args.handler(args, session=data['session'])


async def main(args) -> int:
    url = None if args.no_db else database_url()
    engine = make_engine(url) if url else None
    try:
        if engine is not None:
            await create_db(engine)
        middleware = DataBaseSession(session_pool=make_session_maker(engine) if engine else None)
        return await middleware(_dispatch, args, {})
    finally:
        if engine is not None:
            await engine.dispose()


def run(argv=None) -> int:
    """
    Точка входа CLI.

    Возвращает:
        int: код выхода (0 успех, 1 регрессия пилота, 2 ошибка ввода, 3 численная ошибка, 4 нет порогов пилота).
    """
    setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        validate = getattr(args, 'validate', None)
        if validate is not None:
            validate(args.command_parser, args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        return asyncio.run(main(args))
    except PilotDataError as exc:
        logger.error('%s', exc)
        return EXIT_MISSING_PILOT
    except NUMERICAL_ERRORS as exc:
        logger.error('Numerical failure: %s', exc)
        return EXIT_NUMERICAL
    except CircrootsError as exc:
        logger.error('%s', exc)
        return EXIT_USAGE
    except KeyboardInterrupt:
        logger.warning('Interrupted')
        return 130


if __name__ == '__main__':
    sys.exit(run())
