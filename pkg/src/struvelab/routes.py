"""Route recording: which top-level evaluation routines a computation touched.

Identity checks evaluate each side inside :func:`recording` so the set of
routines used by each side can be compared against a declared manifest.
"""

from __future__ import annotations

import contextvars
import functools
from contextlib import contextmanager

_ACTIVE: contextvars.ContextVar[tuple] = contextvars.ContextVar("struvelab_routes", default=())


def route(name: str):
    """Decorator: record ``name`` in every active recorder when the function runs."""

    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            for rec in _ACTIVE.get():
                rec.add(name)
            return fn(*args, **kwargs)

        wrapper.route_name = name
        return wrapper

    return deco


@contextmanager
def recording():
    """Collect route names used inside the block into the yielded set."""
    rec: set[str] = set()
    token = _ACTIVE.set(_ACTIVE.get() + (rec,))
    try:
        yield rec
    finally:
        _ACTIVE.reset(token)
