from typing import Any, Awaitable, Callable, Dict

from sqlalchemy.ext.asyncio import async_sessionmaker


class DataBaseSession:
    """Открывает сессию на время одной команды и передает ее обработчику как session."""

    def __init__(self, session_pool: async_sessionmaker | None):
        self.session_pool = session_pool

    async def __call__(
        self,
        handler: Callable[[Any, Dict[str, Any]], Awaitable[Any]],
        event: Any,
        data: Dict[str, Any],
    ) -> Any:
        if self.session_pool is None:
            data['session'] = None
            return await handler(event, data)
        async with self.session_pool() as session:
            data['session'] = session
            return await handler(event, data)
