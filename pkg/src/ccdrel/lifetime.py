"""Failure-time models and their instantiation at a mission time.

Rates are failures per year and mission times are in years.  Conversion
from hours happens at the model-file boundary only.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from typing import Iterable, Iterator, Optional

from .errors import NegativeRate, NegativeTime
from .space import BasicEvent, ConstantProb, Exponential, check_probability

HOURS_PER_YEAR = 8760.0


def exp_cdf(rate: float, t: float) -> float:
    """Unreliability ``1 - exp(-rate * t)`` of an exponential lifetime."""
    rate, t = float(rate), float(t)
    if not rate >= 0.0:
        raise NegativeRate(f"failure rate must be >= 0, got {rate!r}")
    if not t >= 0.0:
        raise NegativeTime(f"mission time must be >= 0, got {t!r}")
    # expm1 keeps precision for small rate*t
    return -math.expm1(-rate * t)


class Assignment(Mapping):
    """Per-event failure probabilities at mission time ``t`` (years)."""

    def __init__(self, probs: Mapping[str, float] | Iterable[tuple[str, float]] = (),
                 t: Optional[float] = None):
        items = probs.items() if isinstance(probs, Mapping) else probs
        self._probs = {k: check_probability(v, f"probability of {k}") for k, v in items}
        if t is not None and not float(t) >= 0.0:
            raise NegativeTime(f"mission time must be >= 0, got {t!r}")
        self.t = None if t is None else float(t)

    def __getitem__(self, key: str) -> float:
        return self._probs[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._probs)

    def __len__(self) -> int:
        return len(self._probs)

    def __repr__(self):
        return f"Assignment({self._probs!r}, t={self.t!r})"


def instantiate(events: Iterable[BasicEvent], t: float) -> Assignment:
    """Evaluate every event's failure model at mission time ``t``."""
    t = float(t)
    if not t >= 0.0:
        raise NegativeTime(f"mission time must be >= 0, got {t!r}")
    probs = {}
    for ev in events:
        if isinstance(ev.model, Exponential):
            probs[ev.id] = exp_cdf(ev.model.rate, t)
        elif isinstance(ev.model, ConstantProb):
            probs[ev.id] = ev.model.p
        else:
            raise TypeError(f"unsupported failure model {ev.model!r}")
    return Assignment(probs, t)
