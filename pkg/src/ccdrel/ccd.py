"""Cause-consequence diagrams: decision boxes, consequence paths and boxes.

A decision box asks whether a subsystem works.  Its NO outcome is the
failure event of the attached fault tree, YES is the complement, and an
IRRELEVANT box stands for the whole sample space so that it can be removed
during reduction.  A consequence path intersects its boxes' outcomes and a
consequence box is the union of disjoint paths.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .diagnostics import ERROR, NOTICE, WARNING, Diagnostic
from .errors import (
    DuplicatePath,
    EmptyPath,
    NotDisjoint,
    SharedLeafAcrossBoxes,
    UnknownEvent,
)
from .eventtree import Branch, EtAtomic, Node, et_semantics
from .faulttree import And, Atomic, FtExpr, Or, ft_prob_closed, ft_semantics, leaf_set
from .space import EventSet, FiniteSpace, build_space, check_disjoint, enumeration_cap

log = logging.getLogger(__name__)


class Selector(enum.IntEnum):
    NO = 0
    YES = 1
    IRRELEVANT = 2

    @classmethod
    def from_code(cls, code: int) -> "Selector":
        """Map an integer code: 0 is NO, 1 is YES, anything else IRRELEVANT."""
        if code == 0:
            return cls.NO
        if code == 1:
            return cls.YES
        return cls.IRRELEVANT


@dataclass(frozen=True)
class DecisionBox:
    id: str
    failure: FtExpr
    selector: Selector = Selector.IRRELEVANT

    def with_selector(self, selector: Selector) -> "DecisionBox":
        return DecisionBox(self.id, self.failure, Selector(selector))


@dataclass(frozen=True)
class ConsequencePath:
    id: str
    boxes: tuple[DecisionBox, ...]

    def __init__(self, id: str, boxes: Iterable[DecisionBox]):
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "boxes", tuple(boxes))

    def relevant(self) -> tuple[DecisionBox, ...]:
        return tuple(b for b in self.boxes if b.selector != Selector.IRRELEVANT)

    def key(self) -> frozenset:
        """Structural identity: the set of (failure tree, outcome) constraints."""
        return frozenset((b.failure, b.selector) for b in self.relevant())


@dataclass(frozen=True)
class ConsequenceBox:
    label: str
    paths: tuple[ConsequencePath, ...]

    def __init__(self, label: str, paths: Iterable[ConsequencePath]):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "paths", tuple(paths))


# --- exact semantics -------------------------------------------------------

def dec_box_semantics(box: DecisionBox, space: FiniteSpace) -> EventSet:
    if box.selector == Selector.IRRELEVANT:
        return space.full()
    failed = ft_semantics(box.failure, space)
    return failed if box.selector == Selector.NO else space.full() - failed


def path_semantics(path: ConsequencePath, space: FiniteSpace) -> EventSet:
    """Left fold of event-tree BRANCH over the box outcomes."""
    if not path.boxes:
        raise EmptyPath(f"consequence path {path.id!r} has no decision boxes")
    acc = dec_box_semantics(path.boxes[0], space)
    for box in path.boxes[1:]:
        step = Branch(EtAtomic(acc), [EtAtomic(dec_box_semantics(box, space))])
        acc = et_semantics(step, space)
    return acc


def box_semantics(cbox: ConsequenceBox, space: FiniteSpace) -> EventSet:
    return et_semantics(Node(EtAtomic(path_semantics(p, space)) for p in cbox.paths), space)


# --- closed forms ----------------------------------------------------------

def _check_path_independence(path: ConsequencePath) -> None:
    seen: dict[str, str] = {}
    for box in path.relevant():
        for e in leaf_set(box.failure):
            if e in seen:
                raise SharedLeafAcrossBoxes(
                    f"event {e!r} feeds both box {seen[e]!r} and box {box.id!r} in path "
                    f"{path.id!r}; boxes are not independent, use the oracle")
            seen[e] = box.id


def box_outcome_prob(box: DecisionBox, assign: Mapping[str, float]) -> float:
    if box.selector == Selector.IRRELEVANT:
        return 1.0
    failed = ft_prob_closed(box.failure, assign)
    return failed if box.selector == Selector.NO else 1.0 - failed


def path_prob_closed(path: ConsequencePath, assign: Mapping[str, float]) -> float:
    """Product over boxes of P(fail) for NO, 1 - P(fail) for YES, 1 otherwise."""
    if not path.boxes:
        raise EmptyPath(f"consequence path {path.id!r} has no decision boxes")
    _check_path_independence(path)
    return math.prod(box_outcome_prob(b, assign) for b in path.boxes)


def structurally_disjoint(a: ConsequencePath, b: ConsequencePath) -> bool:
    """True when some fault tree is answered YES on one path and NO on the other."""
    sa = {}
    for box in a.relevant():
        sa.setdefault(box.failure, set()).add(box.selector)
    for box in b.relevant():
        other = sa.get(box.failure)
        if other and (1 - int(box.selector)) in {int(s) for s in other}:
            return True
    return False


def _duplicates(paths: Sequence[ConsequencePath]) -> list[tuple[int, int]]:
    first: dict[frozenset, int] = {}
    dups = []
    for i, p in enumerate(paths):
        k = p.key()
        if k in first:
            dups.append((first[k], i))
        else:
            first[k] = i
    return dups


def _unproven_pairs(paths: Sequence[ConsequencePath]) -> list[tuple[int, int]]:
    return [(i, j) for i, j in combinations(range(len(paths)), 2)
            if not structurally_disjoint(paths[i], paths[j])]


def box_leaves(cbox: ConsequenceBox) -> set[str]:
    out: set[str] = set()
    for p in cbox.paths:
        for b in p.relevant():
            out |= leaf_set(b.failure)
    return out


def _pairs_disjoint_by_oracle(paths, pairs, space: FiniteSpace) -> list[tuple[int, int]]:
    sems = {}
    bad = []
    for i, j in pairs:
        for k in (i, j):
            if k not in sems:
                sems[k] = path_semantics(paths[k], space)
        if not check_disjoint(space, [sems[i], sems[j]]):
            bad.append((i, j))
    return bad


def box_prob_closed(cbox: ConsequenceBox, assign: Mapping[str, float],
                    space: Optional[FiniteSpace] = None) -> float:
    """Sum of path probabilities over a box of disjoint, distinct paths.

    Disjointness is proved structurally where possible; remaining pairs are
    checked by enumeration over ``space`` (built from ``assign`` when absent
    and small enough).
    """
    paths = cbox.paths
    if not paths:
        log.warning("consequence box %r has no paths; probability 0", cbox.label)
        return 0.0
    dups = _duplicates(paths)
    if dups:
        i, j = dups[0]
        raise DuplicatePath(
            f"paths {paths[i].id!r} and {paths[j].id!r} of {cbox.label!r} are identical")
    pending = _unproven_pairs(paths)
    if pending:
        if space is None:
            leaves = sorted(box_leaves(cbox))
            if len(leaves) > enumeration_cap():
                raise NotDisjoint(
                    f"disjointness of the paths of {cbox.label!r} cannot be established "
                    f"structurally and {len(leaves)} events exceed the oracle cap")
            missing = [e for e in leaves if e not in assign]
            if missing:
                raise UnknownEvent(f"no probability assigned to event(s) {', '.join(missing)}")
            space = build_space([(e, assign[e]) for e in leaves])
        bad = _pairs_disjoint_by_oracle(paths, pending, space)
        if bad:
            i, j = bad[0]
            raise NotDisjoint(
                f"paths {paths[i].id!r} and {paths[j].id!r} of {cbox.label!r} overlap")
    return math.fsum(path_prob_closed(p, assign) for p in paths)


# --- reduction -------------------------------------------------------------

class Reduction(NamedTuple):
    boxes: list[ConsequenceBox]
    dropped_boxes: list[tuple[str, str, str]]  # (consequence, path, box)
    dropped_paths: list[tuple[str, str]]  # (consequence, path)


def reduce_report(ccd: Sequence[ConsequenceBox]) -> Reduction:
    out, dropped_boxes, dropped_paths = [], [], []
    for cbox in ccd:
        paths = []
        for path in cbox.paths:
            kept = path.relevant()
            for b in path.boxes:
                if b.selector == Selector.IRRELEVANT:
                    dropped_boxes.append((cbox.label, path.id, b.id))
            if kept:
                paths.append(ConsequencePath(path.id, kept))
            else:
                log.warning("path %r of %r has only irrelevant boxes; dropped",
                            path.id, cbox.label)
                dropped_paths.append((cbox.label, path.id))
        out.append(ConsequenceBox(cbox.label, paths))
    return Reduction(out, dropped_boxes, dropped_paths)


def reduce(ccd: Sequence[ConsequenceBox]) -> list[ConsequenceBox]:
    """Drop every IRRELEVANT box, and every path left empty by that."""
    return reduce_report(ccd).boxes


# --- generic N-level constructions ----------------------------------------

class HomogeneousPath(NamedTuple):
    path: ConsequencePath
    assignment: dict[str, float]


def build_homogeneous_path(kind: str,
                           no_groups: Sequence[Sequence[float]] = (),
                           yes_groups: Sequence[Sequence[float]] = (),
                           or_no_groups: Sequence[Sequence[float]] = (),
                           or_yes_groups: Sequence[Sequence[float]] = (),
                           prefix: str = "x") -> HomogeneousPath:
    """Build a path of AND/OR-gate boxes from per-box leaf probabilities.

    ``kind`` "A" uses AND gates for ``no_groups``/``yes_groups``, "B" uses OR
    gates, and "C" takes AND gates there plus OR gates from the ``or_*``
    groups.  Every leaf gets a fresh event id, so boxes never share events.
    """
    kind = kind.upper()
    if kind not in ("A", "B", "C"):
        raise ValueError(f"kind must be A, B or C, got {kind!r}")
    if kind != "C" and (or_no_groups or or_yes_groups):
        raise ValueError("or_* groups are only meaningful for type C")
    gate = Or if kind == "B" else And
    specs = ([(gate, Selector.NO, g) for g in no_groups]
             + [(gate, Selector.YES, g) for g in yes_groups]
             + [(Or, Selector.NO, g) for g in or_no_groups]
             + [(Or, Selector.YES, g) for g in or_yes_groups])
    assign: dict[str, float] = {}
    boxes = []
    for i, (g, sel, probs) in enumerate(specs):
        ids = [f"{prefix}{i}_{j}" for j in range(len(probs))]
        assign.update(zip(ids, (float(p) for p in probs)))
        boxes.append(DecisionBox(f"{prefix}{i}", g(Atomic(e) for e in ids), sel))
    return HomogeneousPath(ConsequencePath(f"{kind}-path", boxes), assign)


def type_formula(and_no: Sequence[Sequence[float]] = (),
                 and_yes: Sequence[Sequence[float]] = (),
                 or_no: Sequence[Sequence[float]] = (),
                 or_yes: Sequence[Sequence[float]] = ()) -> float:
    """Closed product law for mixed AND/OR box groups, written out directly.

    NO on an AND box contributes the product of its leaves, YES one minus
    that; NO on an OR box contributes one minus the product of complements,
    YES the product of complements.
    """
    terms = []
    terms += [math.prod(g) for g in and_no]
    terms += [1.0 - math.prod(g) for g in and_yes]
    terms += [1.0 - math.prod(1.0 - q for q in g) for g in or_no]
    terms += [math.prod(1.0 - q for q in g) for g in or_yes]
    return math.prod(terms)


def full_expansion(label: str, boxes: Sequence[tuple[str, FtExpr]]) -> ConsequenceBox:
    """All 2**k YES/NO selector vectors over a fixed box sequence."""
    paths = []
    for sels in product((Selector.YES, Selector.NO), repeat=len(boxes)):
        pid = "P" + "".join("1" if s == Selector.YES else "0" for s in sels)
        paths.append(ConsequencePath(
            pid, [DecisionBox(bid, ft, s) for (bid, ft), s in zip(boxes, sels)]))
    return ConsequenceBox(label, paths)


# --- validation ------------------------------------------------------------

def validate_box(cbox: ConsequenceBox, space: Optional[FiniteSpace] = None) -> list[Diagnostic]:
    """Check the disjoint/distinct hypotheses of the box-sum law."""
    diags: list[Diagnostic] = []
    paths = cbox.paths
    if not paths:
        diags.append(Diagnostic(WARNING, "EmptyBox",
                                f"consequence {cbox.label!r} has no paths (probability 0)"))
        return diags
    for p in paths:
        if not p.boxes:
            diags.append(Diagnostic(ERROR, "EmptyPath", f"path {p.id!r} has no boxes"))
        elif not p.relevant():
            diags.append(Diagnostic(NOTICE, "IrrelevantPath",
                                    f"path {p.id!r} of {cbox.label!r} is the whole space"))
    dup_set = set()
    for i, j in _duplicates(paths):
        dup_set.add((i, j))
        diags.append(Diagnostic(ERROR, "DuplicatePath",
                                f"paths {paths[i].id!r} and {paths[j].id!r} of "
                                f"{cbox.label!r} are identical"))
    pending = [pr for pr in _unproven_pairs(paths) if pr not in dup_set]
    if pending:
        if space is None:
            diags.append(Diagnostic(
                WARNING, "DisjointnessUnverified",
                f"{len(pending)} path pair(s) of {cbox.label!r} are not structurally "
                "disjoint; supply a space to check them"))
        else:
            for i, j in _pairs_disjoint_by_oracle(paths, pending, space):
                diags.append(Diagnostic(ERROR, "NotDisjoint",
                                        f"paths {paths[i].id!r} and {paths[j].id!r} of "
                                        f"{cbox.label!r} overlap"))
    return diags


__all__ = [
    "Selector", "DecisionBox", "ConsequencePath", "ConsequenceBox",
    "dec_box_semantics", "path_semantics", "box_semantics",
    "box_outcome_prob", "path_prob_closed", "box_prob_closed",
    "structurally_disjoint", "box_leaves",
    "Reduction", "reduce", "reduce_report",
    "HomogeneousPath", "build_homogeneous_path", "type_formula", "full_expansion",
    "validate_box",
]
