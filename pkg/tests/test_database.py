import asyncio

import pytest

from common.defaults import DEFAULT_DATABASE_URL
from database.engine import create_db, database_url, drop_db, make_engine, make_session_maker
from database.orm_query import (
    orm_estimates_add_all,
    orm_estimates_get_by_run,
    orm_run_add,
    orm_run_finish,
    orm_runs_get_all,
)
from middlewares.db import DataBaseSession


ROW = {
    'experiment': 'SnTailEps', 'dist': 'rademacher', 'phi': 'const', 'n': 16, 'param': 0.5,
    'trials': 200, 'hits': 7, 'p_hat': 0.035, 'ci_lo': 0.017, 'ci_hi': 0.07,
    'base_seed': 2 ** 64 - 1, 'prime_n': 0,
}


def test_database_url_resolution(monkeypatch):
    assert database_url() is None
    monkeypatch.setenv('RS_DATABASE', 'on')
    monkeypatch.delenv('DATABASE_URL', raising=False)
    monkeypatch.delenv('DATABASE_HOST', raising=False)
    assert database_url() == DEFAULT_DATABASE_URL
    monkeypatch.setenv('DATABASE_HOST', 'db')
    monkeypatch.setenv('DATABASE_USER', 'u')
    monkeypatch.setenv('DATABASE_PASSWORD', 'p')
    monkeypatch.setenv('DATABASE_NAME', 'circroots')
    assert database_url() == 'postgresql+asyncpg://u:p@db/circroots'
    monkeypatch.setenv('DATABASE_URL', 'sqlite+aiosqlite:///x.sqlite3')
    assert database_url() == 'sqlite+aiosqlite:///x.sqlite3'


def test_round_trip(tmp_path):
    async def scenario():
        engine = make_engine(f'sqlite+aiosqlite:///{tmp_path / "test.sqlite3"}')
        try:
            await create_db(engine)
            async with make_session_maker(engine)() as session:
                run_id = await orm_run_add(session, data={
                    'command': 'experiment', 'config': '{}', 'version': 'circroots test',
                    'started': '2026-01-01T00:00:00+00:00',
                })
                await orm_estimates_add_all(session, run_id, [ROW, {**ROW, 'param': 1.0, 'hits': 20}])
                await orm_run_finish(session, run_id, '2026-01-01T00:01:00+00:00')
                runs = await orm_runs_get_all(session)
                estimates = await orm_estimates_get_by_run(session, run_id)
                result = (
                    [(r.command, r.finished, r.thresholds_hash) for r in runs],
                    [(e.param, e.hits, e.base_seed) for e in estimates],
                )
            await drop_db(engine)
            return result
        finally:
            await engine.dispose()

    runs, estimates = asyncio.run(scenario())
    assert runs == [('experiment', '2026-01-01T00:01:00+00:00', None)]
    assert estimates == [(0.5, 7, str(2 ** 64 - 1)), (1.0, 20, str(2 ** 64 - 1))]


@pytest.mark.parametrize('with_pool', [False, True])
def test_session_middleware(tmp_path, with_pool):
    async def handler(event, data):
        return event, data['session'] is not None

    async def scenario():
        if not with_pool:
            return await DataBaseSession(None)(handler, 'event', {})
        engine = make_engine(f'sqlite+aiosqlite:///{tmp_path / "mw.sqlite3"}')
        try:
            return await DataBaseSession(make_session_maker(engine))(handler, 'event', {})
        finally:
            await engine.dispose()

    assert asyncio.run(scenario()) == ('event', with_pool)
