"""Per-request compute budget (TILEPUMP_BUDGET_MS).

Long-running loops call check_budget() at step boundaries; when a deadline is
armed and passed, BudgetExceeded propagates to the CLI (exit 3) or the
service (HTTP 503).
"""

from __future__ import annotations

import os
import time
from contextlib import contextmanager
from contextvars import ContextVar

from .errors import BudgetExceeded

_deadline: ContextVar[float | None] = ContextVar("tilepump_deadline", default=None)

ENV_VAR = "TILEPUMP_BUDGET_MS"


def budget_ms_from_env() -> float | None:
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return None
    try:
        ms = float(raw)
    except ValueError:
        return None
    return ms if ms > 0 else None


@contextmanager
def budget(ms: float | None):
    """Arm a deadline `ms` milliseconds from now (None disarms)."""
    token = _deadline.set(None if ms is None else time.monotonic() + ms / 1000.0)
    try:
        yield
    finally:
        _deadline.reset(token)


def check_budget() -> None:
    deadline = _deadline.get()
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceeded("compute budget exhausted")
