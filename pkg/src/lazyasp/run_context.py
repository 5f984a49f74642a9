"""
Run identifiers for log correlation.

Each solve run binds a fresh identifier into the structlog context so that
log lines of concurrently running solver processes can be told apart.
"""

import uuid
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator, Optional

import structlog

__all__ = ["get_run_id", "bind_run_id"]

_run_id: ContextVar[Optional[str]] = ContextVar("lazyasp_run_id", default=None)


def get_run_id() -> Optional[str]:
    """
    Get the identifier of the solve run active in this context.

    Returns:
        The run id string, or None outside of a run
    """
    return _run_id.get()


@contextmanager
def bind_run_id(run_id: Optional[str] = None) -> Iterator[str]:
    """Bind a run id (generated if not given) for the duration of the block."""
    value = run_id or uuid.uuid4().hex
    token = _run_id.set(value)
    structlog.contextvars.bind_contextvars(run_id=value)
    try:
        yield value
    finally:
        structlog.contextvars.unbind_contextvars("run_id")
        _run_id.reset(token)
