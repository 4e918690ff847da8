"""Exact finite probability spaces over independent basic events.

A :class:`FiniteSpace` enumerates all ``2**n`` joint states of ``n``
independent Bernoulli events.  Outcome ``k`` has event ``i`` failed iff bit
``i`` of ``k`` is set.  Event sets are boolean masks over the outcomes, so
set equality is plain array equality.

This is the brute-force oracle the closed forms are tested against; it is
deliberately simple rather than fast.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import CapExceeded, ForeignEvent, InvalidProbability, NegativeRate, UnknownEvent

DEFAULT_CAP = 20
NORMALIZATION_TOL = 1e-12
INDEPENDENCE_TOL = 1e-9


def enumeration_cap() -> int:
    """Maximum number of events the oracle will enumerate.

    ``CCD_ORACLE_CAP`` in the environment overrides the default of 20.
    """
    raw = os.environ.get("CCD_ORACLE_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"CCD_ORACLE_CAP must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValueError("CCD_ORACLE_CAP must be non-negative")
    return cap


def check_probability(p: float, what: str = "probability") -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):  # also rejects NaN
        raise InvalidProbability(f"{what} must lie in [0, 1], got {p!r}")
    return p


@dataclass(frozen=True)
class ConstantProb:
    p: float

    def __post_init__(self):
        check_probability(self.p)


@dataclass(frozen=True)
class Exponential:
    """Constant failure rate, in failures per year."""

    rate: float

    def __post_init__(self):
        if not (self.rate >= 0.0) or math.isinf(self.rate):
            raise NegativeRate(f"failure rate must be finite and >= 0, got {self.rate!r}")


FailureModel = Union[ConstantProb, Exponential]


@dataclass(frozen=True)
class BasicEvent:
    id: str
    model: FailureModel

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("basic event id must be a non-empty string")


class FiniteSpace:
    """Product Bernoulli space over an ordered list of events."""

    def __init__(self, events: Sequence[tuple[str, float]]):
        ids = [e for e, _ in events]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate event ids in space")
        self.events: tuple[tuple[str, float], ...] = tuple(
            (e, check_probability(p, f"probability of {e}")) for e, p in events
        )
        self._index = {e: i for i, e in enumerate(ids)}
        n = len(ids)
        weights = np.ones(1)
        for _, p in self.events:
            # new event becomes the high bit
            weights = np.concatenate((weights * (1.0 - p), weights * p))
        self.weights = weights
        self.weights.setflags(write=False)
        self._outcomes = np.arange(1 << n, dtype=np.int64)

    @property
    def n(self) -> int:
        return len(self.events)

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e for e, _ in self.events)

    def __contains__(self, event_id: str) -> bool:
        return event_id in self._index

    def __repr__(self):
        return f"FiniteSpace({dict(self.events)!r})"

    def atom(self, event_id: str) -> "EventSet":
        """Outcomes in which ``event_id`` occurred."""
        try:
            i = self._index[event_id]
        except KeyError:
            raise UnknownEvent(f"event {event_id!r} is not part of this space") from None
        return EventSet(self, ((self._outcomes >> i) & 1).astype(bool))

    def full(self) -> "EventSet":
        return EventSet(self, np.ones(self.size, dtype=bool))

    def empty(self) -> "EventSet":
        return EventSet(self, np.zeros(self.size, dtype=bool))

    def outcome(self, index: int) -> dict[str, bool]:
        return {e: bool((index >> i) & 1) for i, (e, _) in enumerate(self.events)}


class EventSet:
    """A subset of the outcomes of one :class:`FiniteSpace`."""

    __slots__ = ("space", "mask")

    def __init__(self, space: FiniteSpace, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (space.size,):
            raise ForeignEvent("mask does not match the outcome set of the space")
        mask.setflags(write=False)
        self.space = space
        self.mask = mask

    def _same(self, other: "EventSet") -> None:
        if other.space is not self.space:
            raise ForeignEvent("event sets come from different spaces")

    def __and__(self, other: "EventSet") -> "EventSet":
        self._same(other)
        return EventSet(self.space, self.mask & other.mask)

    def __or__(self, other: "EventSet") -> "EventSet":
        self._same(other)
        return EventSet(self.space, self.mask | other.mask)

    def __invert__(self) -> "EventSet":
        return EventSet(self.space, ~self.mask)

    def __sub__(self, other: "EventSet") -> "EventSet":
        self._same(other)
        return EventSet(self.space, self.mask & ~other.mask)

    def __eq__(self, other):
        if not isinstance(other, EventSet):
            return NotImplemented
        return other.space is self.space and bool(np.array_equal(self.mask, other.mask))

    def __hash__(self):
        return hash((id(self.space), self.mask.tobytes()))

    def __le__(self, other: "EventSet") -> bool:
        self._same(other)
        return not bool(np.any(self.mask & ~other.mask))

    def __len__(self):
        return int(self.mask.sum())

    def is_empty(self) -> bool:
        return not bool(self.mask.any())

    def __repr__(self):
        return f"EventSet({len(self)}/{self.space.size} outcomes)"


def build_space(events: Union[Mapping[str, float], Iterable[tuple[str, float]]],
                cap: int | None = None) -> FiniteSpace:
    """Materialize the joint space of independent events.

    >>> s = build_space({"a": 0.2, "b": 0.3})
    >>> sorted(round(w, 12) for w in s.weights)
    [0.06, 0.14, 0.24, 0.56]
    """
    pairs = list(events.items()) if isinstance(events, Mapping) else list(events)
    limit = enumeration_cap() if cap is None else cap
    if len(pairs) > limit:
        raise CapExceeded(
            f"{len(pairs)} basic events exceed the enumeration cap of {limit} "
            "(set CCD_ORACLE_CAP to raise it)"
        )
    return FiniteSpace(pairs)


def prob(space: FiniteSpace, event: EventSet) -> float:
    if event.space is not space:
        raise ForeignEvent("event set was not drawn from this space")
    # exact-ish summation; keeps complement/additivity laws within 1e-12
    return min(1.0, max(0.0, math.fsum(space.weights[event.mask])))


def check_disjoint(space: FiniteSpace, events: Sequence[EventSet]) -> bool:
    for e in events:
        if e.space is not space:
            raise ForeignEvent("event set was not drawn from this space")
    seen = np.zeros(space.size, dtype=bool)
    for e in events:
        if np.any(seen & e.mask):
            return False
        seen |= e.mask
    return True


def check_mutual_independence(space: FiniteSpace, events: Sequence[EventSet],
                              tol: float = INDEPENDENCE_TOL) -> bool:
    """True iff every non-empty sub-collection factorizes in probability."""
    if len(events) > DEFAULT_CAP:
        raise CapExceeded(f"{len(events)} events give 2^{len(events)} subsets to check")
    for e in events:
        if e.space is not space:
            raise ForeignEvent("event set was not drawn from this space")
    probs = [prob(space, e) for e in events]
    for k in range(2, len(events) + 1):
        for combo in combinations(range(len(events)), k):
            mask = np.logical_and.reduce([events[i].mask for i in combo])
            joint = math.fsum(space.weights[mask])
            if abs(joint - math.prod(probs[i] for i in combo)) > tol:
                return False
    return True
