"""The ``.ccd`` model format.

One statement per line, ``#`` starts a comment::

    model "mcc"
    event R prob=0.1
    event LF1 rate=0.96            # failures per year
    ft FT_R = OR(R, NOT(x))
    box RELAY = dec(FT_R)
    path P1 = [RELAY:yes, TIMER:skip]
    consequence MS = { P1, P2 }
    load A consequence=LOAD_A mttr=12 customers=500
    mission t=8760 unit=hours      # stored as years

Events and fault trees share one namespace; boxes, paths, consequences and
loads each have their own.  A fault tree may refer to another by name.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Sequence

from .ccd import (
    ConsequenceBox,
    ConsequencePath,
    DecisionBox,
    Selector,
    structurally_disjoint,
    validate_box,
)
from .diagnostics import ERROR, NOTICE, WARNING, Diagnostic
from .errors import CCDError
from .faulttree import And, Atomic, FtExpr, Not, Or, ft_to_text, iter_leaves, leaf_set, validate_ft
from .lifetime import HOURS_PER_YEAR, Assignment, instantiate
from .metrics import GridStudy, LoadSpec
from .space import BasicEvent, ConstantProb, Exponential, build_space, enumeration_cap

MAX_DEPTH = 200
SELECTOR_WORDS = {"yes": Selector.YES, "no": Selector.NO, "skip": Selector.IRRELEVANT}
SELECTOR_TEXT = {v: k for k, v in SELECTOR_WORDS.items()}


class ParseError(CCDError):
    """The text is not a valid model; ``diagnostics`` says where and why."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(str(first) if first else "parse error")


@dataclass(frozen=True)
class Model:
    name: str = "unnamed"
    events: tuple[BasicEvent, ...] = ()
    fts: dict = field(default_factory=dict)  # name -> FtExpr, references unexpanded
    boxes: dict = field(default_factory=dict)  # name -> fault tree or event name
    paths: dict = field(default_factory=dict)  # name -> ((box, Selector), ...)
    consequences: dict = field(default_factory=dict)  # name -> (path, ...)
    loads: tuple[LoadSpec, ...] = ()
    mission_t: float = 1.0  # years
    locations: dict = field(default_factory=dict, compare=False, repr=False)

    # --- lookups ----------------------------------------------------------

    @property
    def event_ids(self) -> list[str]:
        return [e.id for e in self.events]

    def ft(self, name: str) -> FtExpr:
        """Fault tree ``name`` with references to other trees expanded."""
        if name in self.fts:
            return self._expand(self.fts[name], (name,))
        if name in self.event_ids:
            return Atomic(name)
        raise KeyError(f"no fault tree or event named {name!r}")

    def _expand(self, expr: FtExpr, stack: tuple) -> FtExpr:
        if isinstance(expr, Atomic):
            if expr.id in self.fts:
                if expr.id in stack:
                    raise ValueError(f"cyclic fault-tree reference through {expr.id!r}")
                return self._expand(self.fts[expr.id], stack + (expr.id,))
            return expr
        if isinstance(expr, Not):
            return Not(self._expand(expr.child, stack))
        return type(expr)(self._expand(c, stack) for c in expr.children)

    def box(self, name: str, selector: Selector = Selector.IRRELEVANT) -> DecisionBox:
        return DecisionBox(name, self.ft(self.boxes[name]), selector)

    def path(self, name: str) -> ConsequencePath:
        return ConsequencePath(name, [self.box(b, s) for b, s in self.paths[name]])

    def consequence(self, name: str) -> ConsequenceBox:
        return ConsequenceBox(name, [self.path(p) for p in self.consequences[name]])

    def ccd(self) -> list[ConsequenceBox]:
        return [self.consequence(c) for c in self.consequences]

    def assignment(self, t: Optional[float] = None) -> Assignment:
        return instantiate(self.events, self.mission_t if t is None else t)

    def study(self, t: Optional[float] = None) -> GridStudy:
        return GridStudy(self.loads, self.mission_t if t is None else t)

    def target(self, name: str):
        """Resolve an evaluation target: consequence, then path, then fault tree."""
        if name in self.consequences:
            return self.consequence(name)
        if name in self.paths:
            return self.path(name)
        if name in self.fts or name in self.event_ids:
            return self.ft(name)
        raise KeyError(f"no consequence, path or fault tree named {name!r}")

    def merged(self) -> "Model":
        """Copy where complementary sibling paths are combined.

        Two paths of the same consequence that visit the same boxes in the
        same order and differ only in one box, answered yes on one and no on
        the other, cover exactly the event where that box is skipped.  Such
        pairs are merged (keeping the first name) until none remain.  Paths
        shared by several consequences are left alone, as are pairs whose
        merge would skip every box.
        """
        uses: dict[str, int] = {}
        for ps in self.consequences.values():
            for p in ps:
                uses[p] = uses.get(p, 0) + 1
        paths = dict(self.paths)
        consequences = {}
        for cname, ps in self.consequences.items():
            ps = list(ps)
            changed = True
            while changed:
                changed = False
                for i, a in enumerate(ps):
                    j = next((j for j in range(i + 1, len(ps))
                              if uses.get(a) == 1 and uses.get(ps[j]) == 1
                              and _complementary(paths[a], paths[ps[j]]) is not None), None)
                    if j is None:
                        continue
                    k = _complementary(paths[a], paths[ps[j]])
                    entries = list(paths[a])
                    entries[k] = (entries[k][0], Selector.IRRELEVANT)
                    paths[a] = tuple(entries)
                    del paths[ps[j]]
                    del ps[j]
                    changed = True
                    break
            consequences[cname] = tuple(ps)
        return replace(self, paths=paths, consequences=consequences,
                       locations=dict(self.locations))

    def reduced(self, merge: bool = False) -> "Model":
        """Copy without ``skip`` entries; paths left empty are removed.

        With ``merge`` complementary sibling paths are combined first (see
        ``merged``), which turns a full expansion into its minimal form.
        """
        if merge:
            return self.merged().reduced()
        paths = {}
        for name, entries in self.paths.items():
            kept = tuple((b, s) for b, s in entries if s != Selector.IRRELEVANT)
            if kept:
                paths[name] = kept
        consequences = {c: tuple(p for p in ps if p in paths)
                        for c, ps in self.consequences.items()}
        return replace(self, paths=paths, consequences=consequences,
                       locations=dict(self.locations))


def _complementary(a, b) -> Optional[int]:
    """Index of the only entry where ``a`` and ``b`` say yes/no, else None."""
    if len(a) != len(b) or any(x[0] != y[0] for x, y in zip(a, b)):
        return None
    diff = [k for k, (x, y) in enumerate(zip(a, b)) if x[1] != y[1]]
    if len(diff) != 1:
        return None
    k = diff[0]
    if {a[k][1], b[k][1]} != {Selector.YES, Selector.NO}:
        return None
    # a merge that leaves only skips would describe the whole space, which
    # reduction could not represent as a path
    if all(s == Selector.IRRELEVANT for i, (_, s) in enumerate(a) if i != k):
        return None
    return k


# --- lexer ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<comment>\#.*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<punct>[=(),\[\]{}:])
  | (?P<bad>.)
""", re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    col: int


class _Syntax(Exception):
    def __init__(self, col: int, code: str, message: str):
        self.col, self.code, self.message = col, code, message


def _tokenize(line: str) -> list[Tok]:
    toks = []
    for m in _TOKEN.finditer(line):
        kind = m.lastgroup
        if kind == "bad":
            raise _Syntax(m.start() + 1, "UnexpectedCharacter",
                          f"unexpected character {m.group()!r}")
        if kind != "ws" and kind != "comment":
            toks.append(Tok(kind, m.group(), m.start() + 1))
    return toks


class _Line:
    """Cursor over the tokens of one statement."""

    def __init__(self, toks: list[Tok], width: int):
        self.toks, self.i, self.width = toks, 0, width

    def peek(self) -> Optional[Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def col(self) -> int:
        t = self.peek()
        return t.col if t else self.width + 1

    def next(self, kind: str, what: str, text: Optional[str] = None) -> Tok:
        t = self.peek()
        if t is None or t.kind != kind or (text is not None and t.text != text):
            found = "end of line" if t is None else repr(t.text)
            raise _Syntax(self.col(), "ParseError", f"expected {what}, found {found}")
        self.i += 1
        return t

    def punct(self, ch: str) -> Tok:
        return self.next("punct", repr(ch), ch)

    def at(self, ch: str) -> bool:
        t = self.peek()
        return t is not None and t.kind == "punct" and t.text == ch

    def end(self) -> None:
        if self.peek() is not None:
            raise _Syntax(self.col(), "ParseError", f"unexpected {self.peek().text!r}")

    def number(self, what: str) -> float:
        t = self.next("number", what)
        v = float(t.text)
        if not math.isfinite(v):
            raise _Syntax(t.col, "ParseError", f"{what} is not finite")
        return v

    def key(self, name: str) -> Tok:
        t = self.next("ident", f"'{name}='", name)
        self.punct("=")
        return t


def _expr(cur: _Line, depth: int = 0) -> FtExpr:
    if depth > MAX_DEPTH:
        raise _Syntax(cur.col(), "NestingTooDeep", f"expressions nest deeper than {MAX_DEPTH}")
    t = cur.next("ident", "an event, fault tree, AND(...), OR(...) or NOT(...)")
    word = t.text
    if word in ("AND", "OR", "NOT") and cur.at("("):
        cur.punct("(")
        args = []
        if not cur.at(")"):
            args.append(_expr(cur, depth + 1))
            while cur.at(","):
                cur.punct(",")
                args.append(_expr(cur, depth + 1))
        cur.punct(")")
        if word == "NOT":
            if len(args) != 1:
                raise _Syntax(t.col, "ParseError", "NOT takes exactly one argument")
            return Not(args[0])
        return And(args) if word == "AND" else Or(args)
    return Atomic(word)


@dataclass
class _Stmt:
    kind: str
    name: str
    line: int
    col: int
    value: object


def _statement(cur: _Line, lineno: int) -> Optional[_Stmt]:
    head = cur.peek()
    if head is None:
        return None
    kw = cur.next("ident", "a statement keyword").text
    if kw == "model":
        name = cur.next("string", "a quoted model name").text
        cur.end()
        return _Stmt("model", re.sub(r"\\(.)", r"\1", name[1:-1]), lineno, head.col, None)
    if kw == "event":
        ident = cur.next("ident", "an event name")
        which = cur.next("ident", "'rate=' or 'prob='")
        if which.text not in ("rate", "prob"):
            raise _Syntax(which.col, "ParseError", f"expected 'rate=' or 'prob=', found {which.text!r}")
        cur.punct("=")
        numtok = cur.peek()
        v = cur.number("a number")
        cur.end()
        if which.text == "prob" and not 0.0 <= v <= 1.0:
            raise _Syntax(numtok.col, "InvalidProbability", f"probability {v!r} outside [0, 1]")
        if which.text == "rate" and v < 0:
            raise _Syntax(numtok.col, "NegativeRate", f"failure rate {v!r} is negative")
        model = Exponential(v) if which.text == "rate" else ConstantProb(v)
        return _Stmt("event", ident.text, lineno, ident.col, model)
    if kw == "ft":
        ident = cur.next("ident", "a fault-tree name")
        cur.punct("=")
        expr = _expr(cur)
        cur.end()
        return _Stmt("ft", ident.text, lineno, ident.col, expr)
    if kw == "box":
        ident = cur.next("ident", "a box name")
        cur.punct("=")
        cur.next("ident", "'dec'", "dec")
        cur.punct("(")
        ref = cur.next("ident", "a fault-tree name")
        cur.punct(")")
        cur.end()
        return _Stmt("box", ident.text, lineno, ident.col, (ref.text, ref.col))
    if kw == "path":
        ident = cur.next("ident", "a path name")
        cur.punct("=")
        cur.punct("[")
        entries = []
        if not cur.at("]"):
            while True:
                b = cur.next("ident", "a box name")
                cur.punct(":")
                s = cur.next("ident", "yes, no or skip")
                if s.text not in SELECTOR_WORDS:
                    raise _Syntax(s.col, "ParseError", f"expected yes, no or skip, found {s.text!r}")
                entries.append((b.text, SELECTOR_WORDS[s.text], b.col))
                if not cur.at(","):
                    break
                cur.punct(",")
        cur.punct("]")
        cur.end()
        return _Stmt("path", ident.text, lineno, ident.col, entries)
    if kw == "consequence":
        ident = cur.next("ident", "a consequence name")
        cur.punct("=")
        cur.punct("{")
        refs = []
        if not cur.at("}"):
            while True:
                p = cur.next("ident", "a path name")
                refs.append((p.text, p.col))
                if not cur.at(","):
                    break
                cur.punct(",")
        cur.punct("}")
        cur.end()
        return _Stmt("consequence", ident.text, lineno, ident.col, refs)
    if kw == "load":
        ident = cur.next("ident", "a load name")
        cur.key("consequence")
        ref = cur.next("ident", "a consequence name")
        cur.key("mttr")
        mt = cur.peek()
        mttr = cur.number("an MTTR in hours")
        cur.key("customers")
        ct = cur.next("number", "a customer count")
        cur.end()
        if not mttr > 0:
            raise _Syntax(mt.col, "ParseError", "mttr must be > 0")
        if not re.fullmatch(r"\+?\d+", ct.text) or int(ct.text) <= 0:
            raise _Syntax(ct.col, "ParseError", "customers must be a positive integer")
        return _Stmt("load", ident.text, lineno, ident.col,
                     (ref.text, ref.col, mttr, int(ct.text)))
    if kw == "mission":
        cur.key("t")
        tt = cur.peek()
        t = cur.number("a mission time")
        unit = "years"
        if cur.peek() is not None:
            cur.key("unit")
            u = cur.next("ident", "years or hours")
            if u.text not in ("years", "hours"):
                raise _Syntax(u.col, "ParseError", f"unit must be years or hours, found {u.text!r}")
            unit = u.text
        cur.end()
        if t < 0:
            raise _Syntax(tt.col, "NegativeTime", "mission time is negative")
        return _Stmt("mission", "", lineno, head.col, t / HOURS_PER_YEAR if unit == "hours" else t)
    raise _Syntax(head.col, "ParseError", f"unknown statement {kw!r}")


def _ft_refs(expr: FtExpr) -> Iterator[str]:
    return iter_leaves(expr)


def parse(text: str) -> Model:
    """Parse model text; raises :class:`ParseError` carrying diagnostics."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError([Diagnostic(ERROR, "ParseError", f"input is not UTF-8: {exc.reason}",
                                         1, 1)]) from None
    diags: list[Diagnostic] = []
    stmts: list[_Stmt] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        try:
            cur = _Line(_tokenize(line), len(line))
            st = _statement(cur, lineno)
        except _Syntax as exc:
            diags.append(Diagnostic(ERROR, exc.code, exc.message, lineno, exc.col))
            continue
        if st is not None:
            stmts.append(st)
    if diags:
        raise ParseError(diags)
    try:
        model, diags = _assemble(stmts)
    except RecursionError:
        diags = [Diagnostic(ERROR, "NestingTooDeep", "fault-tree references nest too deeply", 1, 1)]
    if diags:
        raise ParseError(diags)
    return model


def _assemble(stmts: list[_Stmt]) -> tuple[Model, list[Diagnostic]]:
    diags: list[Diagnostic] = []
    name = "unnamed"
    events: list[BasicEvent] = []
    fts: dict = {}
    boxes: dict = {}
    paths: dict = {}
    consequences: dict = {}
    loads: list[LoadSpec] = []
    mission = None
    where: dict = {}
    seen_model = False
    spaces = {"event": "node", "ft": "node", "box": "box", "path": "path",
              "consequence": "consequence", "load": "load"}
    declared: dict = {}

    def err(st, code, msg, col=None):
        diags.append(Diagnostic(ERROR, code, msg, st.line, st.col if col is None else col))

    for st in stmts:
        if st.kind == "model":
            if seen_model:
                err(st, "DuplicateName", "model name given twice")
            seen_model = True
            name = st.name
            continue
        if st.kind == "mission":
            if mission is not None:
                err(st, "DuplicateName", "mission time given twice")
            mission = st.value
            where[("mission", "")] = (st.line, st.col)
            continue
        ns = spaces[st.kind]
        if (ns, st.name) in declared:
            prev = declared[(ns, st.name)]
            err(st, "DuplicateName", f"{st.name!r} already declared on line {prev}")
            continue
        declared[(ns, st.name)] = st.line
        where[(st.kind, st.name)] = (st.line, st.col)
        if st.kind == "event":
            events.append(BasicEvent(st.name, st.value))
        elif st.kind == "ft":
            fts[st.name] = st.value
        elif st.kind == "box":
            boxes[st.name] = st.value
        elif st.kind == "path":
            paths[st.name] = st.value
        elif st.kind == "consequence":
            consequences[st.name] = st.value
        elif st.kind == "load":
            loads.append(st)

    nodes = {e.id for e in events} | set(fts)
    by_name = {(s.kind, s.name): s for s in stmts}
    for fname, expr in fts.items():
        st = by_name[("ft", fname)]
        for ref in dict.fromkeys(_ft_refs(expr)):
            if ref not in nodes:
                err(st, "UnresolvedReference", f"fault tree {fname!r} refers to unknown {ref!r}")
    # cycles among fault-tree references
    state: dict = {}

    def visit(n, chain):
        state[n] = 1
        for ref in dict.fromkeys(_ft_refs(fts[n])):
            if ref in fts:
                if state.get(ref) == 1:
                    st = by_name[("ft", n)]
                    err(st, "CyclicReference",
                        f"fault trees refer to each other in a cycle: {' -> '.join(chain + [ref])}")
                elif ref not in state:
                    visit(ref, chain + [ref])
        state[n] = 2

    for n in fts:
        if n not in state:
            visit(n, [n])

    out_boxes = {}
    for bname, (ref, col) in boxes.items():
        if ref not in nodes:
            err(by_name[("box", bname)], "UnresolvedReference",
                f"box {bname!r} refers to unknown fault tree {ref!r}", col)
        out_boxes[bname] = ref
    out_paths = {}
    for pname, entries in paths.items():
        st = by_name[("path", pname)]
        for b, _, col in entries:
            if b not in boxes:
                err(st, "UnresolvedReference", f"path {pname!r} refers to unknown box {b!r}", col)
        out_paths[pname] = tuple((b, s) for b, s, _ in entries)
    out_cons = {}
    for cname, refs in consequences.items():
        st = by_name[("consequence", cname)]
        for p, col in refs:
            if p not in paths:
                err(st, "UnresolvedReference",
                    f"consequence {cname!r} refers to unknown path {p!r}", col)
        out_cons[cname] = tuple(p for p, _ in refs)
    out_loads = []
    for st in loads:
        ref, col, mttr, customers = st.value
        if ref not in consequences:
            err(st, "UnresolvedReference", f"load {st.name!r} refers to unknown consequence {ref!r}", col)
        out_loads.append(LoadSpec(st.name, ref, mttr, customers))

    model = Model(name, tuple(events), fts, out_boxes, out_paths, out_cons, tuple(out_loads),
                  1.0 if mission is None else mission, where)
    return model, diags


# --- validation -----------------------------------------------------------

def _loc(model: Model, kind: str, name: str) -> tuple[Optional[int], Optional[int]]:
    return model.locations.get((kind, name), (None, None))


def _reference_diags(model: Model) -> list[Diagnostic]:
    diags = []
    nodes = set(model.event_ids) | set(model.fts)
    for fname, expr in model.fts.items():
        for ref in dict.fromkeys(_ft_refs(expr)):
            if ref not in nodes:
                diags.append(Diagnostic(ERROR, "UnresolvedReference",
                                        f"fault tree {fname!r} refers to unknown {ref!r}",
                                        *_loc(model, "ft", fname)))
    for bname, ref in model.boxes.items():
        if ref not in nodes:
            diags.append(Diagnostic(ERROR, "UnresolvedReference",
                                    f"box {bname!r} refers to unknown fault tree {ref!r}",
                                    *_loc(model, "box", bname)))
    for pname, entries in model.paths.items():
        for b, _ in entries:
            if b not in model.boxes:
                diags.append(Diagnostic(ERROR, "UnresolvedReference",
                                        f"path {pname!r} refers to unknown box {b!r}",
                                        *_loc(model, "path", pname)))
    for cname, refs in model.consequences.items():
        for p in refs:
            if p not in model.paths:
                diags.append(Diagnostic(ERROR, "UnresolvedReference",
                                        f"consequence {cname!r} refers to unknown path {p!r}",
                                        *_loc(model, "consequence", cname)))
    for ld in model.loads:
        if ld.consequence not in model.consequences:
            diags.append(Diagnostic(ERROR, "UnresolvedReference",
                                    f"load {ld.label!r} refers to unknown consequence "
                                    f"{ld.consequence!r}", *_loc(model, "load", ld.label)))
    return diags


def validate(model: Model) -> list[Diagnostic]:
    """Static checks of the independence and disjointness hypotheses."""
    diags = _reference_diags(model)
    if any(d.severity == ERROR for d in diags):
        return diags
    try:
        for fname in model.fts:
            model.ft(fname)
    except ValueError as exc:
        return diags + [Diagnostic(ERROR, "CyclicReference", str(exc))]

    for fname in model.fts:
        for d in validate_ft(model.ft(fname), model.event_ids, name=f"fault tree {fname!r}"):
            diags.append(replace(d, line=_loc(model, "ft", fname)[0], col=_loc(model, "ft", fname)[1]))

    for pname, entries in model.paths.items():
        line, col = _loc(model, "path", pname)
        if not entries:
            diags.append(Diagnostic(ERROR, "EmptyPath", f"path {pname!r} has no boxes", line, col))
            continue
        if all(s == Selector.IRRELEVANT for _, s in entries):
            diags.append(Diagnostic(WARNING, "IrrelevantPath",
                                    f"path {pname!r} has only skip boxes; reduction removes it",
                                    line, col))
        owner: dict = {}
        reported = set()
        for b, s in entries:
            if s == Selector.IRRELEVANT:
                continue
            for e in leaf_set(model.ft(model.boxes[b])):
                if e in owner and owner[e] != b and e not in reported:
                    reported.add(e)
                    diags.append(Diagnostic(
                        ERROR, "SharedLeafAcrossBoxes",
                        f"event {e!r} feeds boxes {owner[e]!r} and {b!r} in path {pname!r}",
                        line, col))
                owner.setdefault(e, b)

    # disjointness hypotheses need a space only for the pairs structure cannot settle
    for cname in model.consequences:
        line, col = _loc(model, "consequence", cname)
        cbox = model.consequence(cname)
        space = None
        leaves = sorted({e for p in cbox.paths for b in p.relevant() for e in leaf_set(b.failure)})
        pending = any(not structurally_disjoint(a, b)
                      for i, a in enumerate(cbox.paths) for b in cbox.paths[i + 1:])
        if pending and len(leaves) <= enumeration_cap():
            space = build_space([(e, 0.5) for e in leaves])
        for d in validate_box(cbox, space):
            diags.append(replace(d, line=line, col=col))

    for ev in model.events:
        if isinstance(ev.model, Exponential) and ev.model.rate > 1000:
            line, col = _loc(model, "event", ev.id)
            diags.append(Diagnostic(WARNING, "SuspiciousRate",
                                    f"event {ev.id!r} fails {ev.model.rate} times per year; "
                                    "rates are per year, not per hour", line, col))
    if model.mission_t > 200:
        line, col = _loc(model, "mission", "")
        diags.append(Diagnostic(WARNING, "SuspiciousMissionTime",
                                f"mission time of {model.mission_t} years; use unit=hours "
                                "for hour values", line, col))

    # load consequences single out failure scenarios and are partial by design
    if model.consequences and not model.loads and not any(d.severity == ERROR for d in diags):
        total = _partition_total(model)
        if total is not None and abs(total - 1.0) > 1e-9:
            diags.append(Diagnostic(NOTICE, "NotExhaustive",
                                    f"consequence probabilities sum to {total:.12g}, "
                                    "so the consequences do not cover every outcome"))
    return diags


def _partition_total(model: Model) -> Optional[float]:
    from .ccd import box_prob_closed

    try:
        assign = model.assignment()
        return math.fsum(box_prob_closed(c, assign) for c in model.ccd())
    except CCDError:
        return None


# --- pretty printer -------------------------------------------------------

def _num(x: float) -> str:
    return repr(float(x))


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def pretty_print(model: Model) -> str:
    """Canonical text of ``model``; parsing it gives back an equal model."""
    out = [f"model {_quote(model.name)}"]
    for ev in model.events:
        if isinstance(ev.model, Exponential):
            out.append(f"event {ev.id} rate={_num(ev.model.rate)}")
        else:
            out.append(f"event {ev.id} prob={_num(ev.model.p)}")
    for name, expr in model.fts.items():
        out.append(f"ft {name} = {ft_to_text(expr)}")
    for name, ref in model.boxes.items():
        out.append(f"box {name} = dec({ref})")
    for name, entries in model.paths.items():
        body = ", ".join(f"{b}:{SELECTOR_TEXT[Selector(s)]}" for b, s in entries)
        out.append(f"path {name} = [{body}]")
    for name, refs in model.consequences.items():
        out.append(f"consequence {name} = {{ {', '.join(refs)} }}" if refs
                   else f"consequence {name} = {{ }}")
    for ld in model.loads:
        out.append(f"load {ld.label} consequence={ld.consequence} mttr={_num(ld.mttr)} "
                   f"customers={ld.customers}")
    if model.mission_t != 1.0:
        out.append(f"mission t={_num(model.mission_t)} unit=years")
    return "\n".join(out) + "\n"


def load(path) -> Model:
    with open(path, "rb") as fh:
        return parse(fh.read())


def bundled(name: str) -> Model:
    """One of the models shipped with the package (``mcc.ccd``, ``ieee39.ccd``...)."""
    from importlib.resources import files

    return parse(files("ccdrel.data").joinpath(name).read_bytes())


def bundled_names() -> list[str]:
    from importlib.resources import files

    return sorted(p.name for p in files("ccdrel.data").iterdir() if p.name.endswith(".ccd"))


__all__ = ["Model", "ParseError", "parse", "validate", "pretty_print", "load", "bundled",
           "bundled_names"]
