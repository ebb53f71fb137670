from sqlalchemy import select, update
from sqlalchemy.ext.asyncio import AsyncSession

from database.models import Estimate, Run


async def orm_run_add(session: AsyncSession, data: dict) -> int:
    """
    Асинхронно добавляет запись о запуске команды.

    Аргументы:
        session (AsyncSession): Объект AsyncSession для обмена данными с базой данных.
        data (dict): Словарь с ключами command, config, version, out_dir, thresholds_hash, started.

    Возвращает:
        int: идентификатор новой записи.
    """
    run = Run(
        command=data['command'],
        config=data['config'],
        version=data['version'],
        out_dir=data.get('out_dir'),
        thresholds_hash=data.get('thresholds_hash'),
        started=data['started'],
    )
    session.add(run)
    await session.commit()
    return run.id


async def orm_run_finish(session: AsyncSession, run_id: int, finished: str):
    """
    Асинхронно отмечает время завершения запуска.

    Аргументы:
        session (AsyncSession): Объект AsyncSession для выполнения запроса.
        run_id (int): идентификатор запуска.
        finished (str): метка времени ISO 8601.

    Возвращает:
        None
    """
    query = update(Run).where(Run.id == run_id).values(finished=finished)
    await session.execute(query)
    await session.commit()


async def orm_estimates_add_all(session: AsyncSession, run_id: int, rows: list[dict]):
    """
    Асинхронно сохраняет строки results.csv для запуска.

    Аргументы:
        session (AsyncSession): Объект AsyncSession для обмена данными с базой данных.
        run_id (int): идентификатор запуска.
        rows (list[dict]): строки с колонками results.csv.

    Возвращает:
        None
    """
    session.add_all([Estimate(run_id=run_id, **{**row, 'base_seed': str(row['base_seed'])}) for row in rows])
    await session.commit()


async def orm_estimates_get_by_run(session: AsyncSession, run_id: int):
    query = select(Estimate).where(Estimate.run_id == run_id).order_by(Estimate.id)
    result = await session.execute(query)
    return result.scalars().all()


async def orm_runs_get_all(session: AsyncSession):
    query = select(Run).order_by(Run.id)
    result = await session.execute(query)
    return result.scalars().all()
