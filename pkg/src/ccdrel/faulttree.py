"""Static fault trees: AND/OR/NOT gate expressions over basic events."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, TypeVar, Union

from .diagnostics import ERROR, NOTICE, WARNING, Diagnostic
from .errors import SharedLeaf, UnknownEvent
from .space import EventSet, FiniteSpace


@dataclass(frozen=True)
class Atomic:
    id: str


@dataclass(frozen=True)
class And:
    children: tuple["FtExpr", ...]

    def __init__(self, children: Iterable["FtExpr"] = ()):
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class Or:
    children: tuple["FtExpr", ...]

    def __init__(self, children: Iterable["FtExpr"] = ()):
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class Not:
    child: "FtExpr"


FtExpr = Union[Atomic, And, Or, Not]

T = TypeVar("T")


def fold(ft: FtExpr, atom: Callable[[str], T], full: Callable[[], T], empty: Callable[[], T]) -> T:
    """Evaluate ``ft`` over any boolean algebra supporting ``& | ~``.

    Used with event sets (exact semantics) and with boolean sample columns
    (Monte-Carlo).  Empty AND is the certain event, empty OR the impossible one.
    """
    if isinstance(ft, Atomic):
        return atom(ft.id)
    if isinstance(ft, Not):
        return ~fold(ft.child, atom, full, empty)
    if isinstance(ft, And):
        acc = full()
        for c in ft.children:
            acc = acc & fold(c, atom, full, empty)
        return acc
    if isinstance(ft, Or):
        acc = empty()
        for c in ft.children:
            acc = acc | fold(c, atom, full, empty)
        return acc
    raise TypeError(f"not a fault-tree expression: {ft!r}")


def iter_leaves(ft: FtExpr) -> Iterator[str]:
    """Leaf ids in left-to-right order, repeats included."""
    if isinstance(ft, Atomic):
        yield ft.id
    elif isinstance(ft, Not):
        yield from iter_leaves(ft.child)
    elif isinstance(ft, (And, Or)):
        for c in ft.children:
            yield from iter_leaves(c)
    else:
        raise TypeError(f"not a fault-tree expression: {ft!r}")


def leaves(ft: FtExpr) -> list[str]:
    return list(iter_leaves(ft))


def leaf_set(ft: FtExpr) -> frozenset[str]:
    return frozenset(iter_leaves(ft))


def has_not(ft: FtExpr) -> bool:
    if isinstance(ft, Not):
        return True
    if isinstance(ft, (And, Or)):
        return any(has_not(c) for c in ft.children)
    return False


def ft_semantics(ft: FtExpr, space: FiniteSpace) -> EventSet:
    """The set of outcomes in which the top event of ``ft`` occurs."""
    return fold(ft, space.atom, space.full, space.empty)


def _require_distinct(ft: FtExpr) -> None:
    repeated = [e for e, k in Counter(iter_leaves(ft)).items() if k > 1]
    if repeated:
        raise SharedLeaf(
            f"basic event(s) {', '.join(sorted(repeated))} appear more than once; "
            "closed-form evaluation needs independent leaves (use the oracle)"
        )


def _closed(ft: FtExpr, assign: Mapping[str, float]) -> float:
    if isinstance(ft, Atomic):
        try:
            return float(assign[ft.id])
        except KeyError:
            raise UnknownEvent(f"no probability assigned to event {ft.id!r}") from None
    if isinstance(ft, Not):
        return 1.0 - _closed(ft.child, assign)
    if isinstance(ft, And):
        return math.prod(_closed(c, assign) for c in ft.children)
    if isinstance(ft, Or):
        return 1.0 - math.prod(1.0 - _closed(c, assign) for c in ft.children)
    raise TypeError(f"not a fault-tree expression: {ft!r}")


def ft_prob_closed(ft: FtExpr, assign: Mapping[str, float]) -> float:
    """Top-event probability by the independent-gate product rules.

    AND multiplies child probabilities, OR is one minus the product of the
    complements, NOT complements.  Leaves must be pairwise distinct.
    """
    _require_distinct(ft)
    p = _closed(ft, assign)
    return min(1.0, max(0.0, p))


def _empty_gates(ft: FtExpr) -> Iterator[FtExpr]:
    if isinstance(ft, (And, Or)):
        if not ft.children:
            yield ft
        for c in ft.children:
            yield from _empty_gates(c)
    elif isinstance(ft, Not):
        yield from _empty_gates(ft.child)


def validate_ft(ft: FtExpr, known: Optional[Iterable[str]] = None, name: str = "") -> list[Diagnostic]:
    """Report unknown events, repeated leaves and empty gates."""
    where = f" in {name}" if name else ""
    diags: list[Diagnostic] = []
    counts = Counter(iter_leaves(ft))
    if known is not None:
        known = set(known)
        for e in counts:
            if e not in known:
                diags.append(Diagnostic(ERROR, "UnknownEvent", f"event {e!r}{where} is not declared"))
    for e, k in counts.items():
        if k > 1:
            diags.append(Diagnostic(
                WARNING, "SharedLeaf",
                f"event {e!r} occurs {k} times{where}; closed form unavailable, oracle only"))
    for g in _empty_gates(ft):
        kind = "AND" if isinstance(g, And) else "OR"
        meaning = "certain event" if kind == "AND" else "impossible event"
        diags.append(Diagnostic(NOTICE, "EmptyGate", f"empty {kind} gate{where} is the {meaning}"))
    return diags


def ft_to_text(ft: FtExpr) -> str:
    if isinstance(ft, Atomic):
        return ft.id
    if isinstance(ft, Not):
        return f"NOT({ft_to_text(ft.child)})"
    kind = "AND" if isinstance(ft, And) else "OR"
    return f"{kind}({', '.join(ft_to_text(c) for c in ft.children)})"
