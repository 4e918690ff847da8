"""Brute-force probabilities by enumerating joint states of basic events.

Targets with at most ``enumeration_cap()`` leaves are enumerated directly.
Larger CCD targets are handled when their decision boxes hang off fault
trees with pairwise disjoint leaf sets: each tree is enumerated over its
own events, then the joint states of the trees are enumerated.  Both stages
are plain enumeration; no gate product rule is used anywhere.
"""

from __future__ import annotations

from typing import Mapping, Union

from .ccd import (
    ConsequenceBox,
    ConsequencePath,
    DecisionBox,
    Selector,
    box_semantics,
    dec_box_semantics,
    path_semantics,
)
from .errors import CapExceeded, UnknownEvent
from .eventtree import Branch, EtAtomic, Node, et_semantics
from .faulttree import And, Atomic, FtExpr, Not, Or, ft_semantics, leaf_set
from .space import EventSet, FiniteSpace, build_space, enumeration_cap, prob

Target = Union[FtExpr, DecisionBox, ConsequencePath, ConsequenceBox, Node, Branch, EtAtomic]


def _boxes(target) -> list[DecisionBox]:
    if isinstance(target, DecisionBox):
        return [target]
    if isinstance(target, ConsequencePath):
        return list(target.boxes)
    if isinstance(target, ConsequenceBox):
        return [b for p in target.paths for b in p.boxes]
    return []


def target_leaves(target: Target) -> set[str]:
    if isinstance(target, (Atomic, And, Or, Not)):
        return set(leaf_set(target))
    if isinstance(target, EtAtomic):
        return set() if isinstance(target.event, EventSet) else target_leaves(target.event)
    if isinstance(target, Node):
        return set().union(*(target_leaves(c) for c in target.children))
    if isinstance(target, Branch):
        return target_leaves(target.condition).union(*(target_leaves(c) for c in target.children))
    out: set[str] = set()
    for b in _boxes(target):
        if b.selector != Selector.IRRELEVANT:
            out |= leaf_set(b.failure)
    return out


def semantics(target: Target, space: FiniteSpace):
    if isinstance(target, DecisionBox):
        return dec_box_semantics(target, space)
    if isinstance(target, ConsequencePath):
        return path_semantics(target, space)
    if isinstance(target, ConsequenceBox):
        return box_semantics(target, space)
    if isinstance(target, (Node, Branch, EtAtomic)):
        return et_semantics(target, space)
    return ft_semantics(target, space)


def space_for(target: Target, assign: Mapping[str, float], cap: int | None = None) -> FiniteSpace:
    ids = sorted(target_leaves(target))
    missing = [e for e in ids if e not in assign]
    if missing:
        raise UnknownEvent(f"no probability assigned to event(s) {', '.join(missing)}")
    return build_space([(e, assign[e]) for e in ids], cap=cap)


def _substitute(target, units: dict):
    """Replace each box's failure tree by an atomic stand-in event."""
    def box(b: DecisionBox) -> DecisionBox:
        if b.selector == Selector.IRRELEVANT:
            return b
        return DecisionBox(b.id, Atomic(units[b.failure]), b.selector)

    if isinstance(target, DecisionBox):
        return box(target)
    if isinstance(target, ConsequencePath):
        return ConsequencePath(target.id, [box(b) for b in target.boxes])
    return ConsequenceBox(target.label, [_substitute(p, units) for p in target.paths])


def oracle_prob(target: Target, assign: Mapping[str, float], cap: int | None = None) -> float:
    """Exact probability of ``target`` by enumeration."""
    limit = enumeration_cap() if cap is None else cap
    leaves = target_leaves(target)
    if len(leaves) <= limit:
        space = space_for(target, assign, cap=limit)
        return prob(space, semantics(target, space))
    if not isinstance(target, (DecisionBox, ConsequencePath, ConsequenceBox)):
        raise CapExceeded(f"{len(leaves)} basic events exceed the enumeration cap of {limit}")
    return _modular(target, assign, limit)


def _modular(target, assign: Mapping[str, float], limit: int) -> float:
    trees: list[FtExpr] = []
    for b in _boxes(target):
        if b.selector != Selector.IRRELEVANT and b.failure not in trees:
            trees.append(b.failure)
    seen: dict[str, int] = {}
    for i, ft in enumerate(trees):
        ls = leaf_set(ft)
        if len(ls) > limit:
            raise CapExceeded(f"a single fault tree has {len(ls)} events, above the cap of {limit}")
        for e in ls:
            if e in seen:
                raise CapExceeded(
                    "fault trees share basic events, so they cannot be enumerated "
                    f"separately, and the target has more than {limit} events")
            seen[e] = i
    if len(trees) > limit:
        raise CapExceeded(f"{len(trees)} independent fault trees exceed the cap of {limit}")
    units = {ft: f"__unit{i}" for i, ft in enumerate(trees)}
    unit_probs = {}
    for ft, uid in units.items():
        sub = space_for(ft, assign, cap=limit)
        unit_probs[uid] = prob(sub, ft_semantics(ft, sub))
    reduced = _substitute(target, units)
    space = space_for(reduced, unit_probs, cap=limit)
    return prob(space, semantics(reduced, space))
