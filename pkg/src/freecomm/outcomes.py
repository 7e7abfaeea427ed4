"""Non-answers returned by bounded searches and impossibility checks."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Dict

BOUND_ENV = "FREECOMM_SEARCH_BOUND"


@dataclass(frozen=True)
class Refusal:
    """A bounded search gave up; this says nothing about the mathematics."""

    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Impossibility:
    """A proof that no witness exists, with the invariants that show it."""

    reason: str
    data: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return False


def default_bound() -> int:
    """Exponent bound for p-open subgroup searches (index at most p**bound)."""
    raw = os.environ.get(BOUND_ENV, "3")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{BOUND_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{BOUND_ENV} must be non-negative")
    return value
