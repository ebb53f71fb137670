import logging
import os

from sqlalchemy.ext.asyncio import AsyncEngine, AsyncSession, async_sessionmaker, create_async_engine

from common.defaults import DEFAULT_DATABASE_URL
from database.models import Based


def database_url() -> str | None:
    """URL базы из окружения; None, если сохранение отключено (RS_DATABASE=off)."""
    if os.getenv('RS_DATABASE', '').lower() == 'off':
        return None
    if os.getenv('DATABASE_URL'):
        return os.getenv('DATABASE_URL')
    if os.getenv('DATABASE_HOST'):
        DATABASE_HOST = os.getenv('DATABASE_HOST')
        DATABASE_USER = os.getenv('DATABASE_USER')
        DATABASE_PASSWORD = os.getenv('DATABASE_PASSWORD')
        DATABASE_NAME = os.getenv('DATABASE_NAME')
        return f'postgresql+asyncpg://{DATABASE_USER}:{DATABASE_PASSWORD}@{DATABASE_HOST}/{DATABASE_NAME}'
    return DEFAULT_DATABASE_URL


def make_engine(url: str) -> AsyncEngine:
    echo = logging.getLogger().getEffectiveLevel() <= logging.DEBUG
    return create_async_engine(url, echo=echo)


def make_session_maker(engine: AsyncEngine) -> async_sessionmaker:
    return async_sessionmaker(bind=engine, class_=AsyncSession, expire_on_commit=False)


async def create_db(engine: AsyncEngine):
    async with engine.begin() as conn:
        await conn.run_sync(Based.metadata.create_all)


async def drop_db(engine: AsyncEngine):
    async with engine.begin() as conn:
        await conn.run_sync(Based.metadata.drop_all)
