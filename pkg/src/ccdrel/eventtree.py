"""Event trees: NODE (union of alternatives) and BRANCH (conditioned union)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import ForeignEvent, InvalidProbability, NotDisjoint
from .faulttree import And, Atomic, FtExpr, Not, Or, ft_semantics
from .space import EventSet, FiniteSpace, check_disjoint

SUM_TOL = 1e-12


@dataclass(frozen=True)
class EtAtomic:
    event: Union[EventSet, FtExpr]


@dataclass(frozen=True)
class Node:
    children: tuple["EtExpr", ...]

    def __init__(self, children: Iterable["EtExpr"] = ()):
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class Branch:
    condition: "EtExpr"
    children: tuple["EtExpr", ...]

    def __init__(self, condition: "EtExpr", children: Iterable["EtExpr"] = ()):
        object.__setattr__(self, "condition", condition)
        object.__setattr__(self, "children", tuple(children))


EtExpr = Union[EtAtomic, Node, Branch]


def et_semantics(et: EtExpr, space: FiniteSpace) -> EventSet:
    if isinstance(et, EtAtomic):
        ev = et.event
        if isinstance(ev, EventSet):
            if ev.space is not space:
                raise ForeignEvent("atomic event set belongs to another space")
            return ev
        return ft_semantics(ev, space)
    if isinstance(et, Node):
        acc = space.empty()
        for c in et.children:
            acc = acc | et_semantics(c, space)
        return acc
    if isinstance(et, Branch):
        # X ∩ (h ∪ Branch X rest), with Branch X [] the impossible event
        cond = et_semantics(et.condition, space)
        acc = space.empty()
        for c in reversed(et.children):
            acc = cond & (et_semantics(c, space) | acc)
        return acc
    if isinstance(et, (Atomic, And, Or, Not)):
        return ft_semantics(et, space)
    raise TypeError(f"not an event-tree expression: {et!r}")


def _check_probs(probs: Sequence[float]) -> list[float]:
    out = []
    for p in probs:
        p = float(p)
        if not (0.0 <= p <= 1.0):
            raise InvalidProbability(f"child probability {p!r} outside [0, 1]")
        out.append(p)
    return out


def _verify(children: Optional[Sequence[EventSet]], space: Optional[FiniteSpace]) -> None:
    if children is None or space is None:
        return
    if not check_disjoint(space, children):
        raise NotDisjoint("event-tree children overlap")


def node_prob(children: Sequence[float], *, events: Optional[Sequence[EventSet]] = None,
              space: Optional[FiniteSpace] = None) -> float:
    """Probability of a NODE over pairwise-disjoint children.

    Pass ``events`` and ``space`` to have the disjointness hypothesis checked
    by enumeration; otherwise it is the caller's obligation.
    """
    _verify(events, space)
    total = math.fsum(_check_probs(children))
    if total > 1.0 + SUM_TOL:
        raise NotDisjoint(f"children sum to {total!r} > 1; they cannot be disjoint")
    return min(total, 1.0)


def branch_prob(condition: float, children: Sequence[float], *,
                events: Optional[Sequence[EventSet]] = None,
                space: Optional[FiniteSpace] = None) -> float:
    """Probability of a BRANCH: condition times the NODE of its children.

    The condition must be independent of the children.
    """
    (y,) = _check_probs([condition])
    return y * node_prob(children, events=events, space=space)
