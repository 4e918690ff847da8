"""Grid reliability indices: forced outage rate and SAIDI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .ccd import ConsequenceBox, Selector, box_prob_closed
from .errors import InvalidProbability, MissingLoadProb, ZeroCustomers
from .faulttree import FtExpr, ft_prob_closed
from .lifetime import instantiate
from .montecarlo import DEFAULT_SAMPLES, DEFAULT_SEED, mcs_estimate
from .oracle import oracle_prob
from .space import BasicEvent, Exponential

METHODS = ("closed", "oracle", "mcs", "exactly-one")


@dataclass(frozen=True)
class LoadSpec:
    label: str
    consequence: str
    mttr: float  # hours per interruption
    customers: int

    def __post_init__(self):
        if not self.mttr > 0:
            raise ValueError(f"load {self.label!r}: mttr must be > 0, got {self.mttr!r}")
        if not self.customers > 0:
            raise ZeroCustomers(f"load {self.label!r}: customers must be > 0, got {self.customers!r}")


@dataclass(frozen=True)
class GridStudy:
    loads: tuple[LoadSpec, ...]
    t: float = 1.0

    def __init__(self, loads: Iterable[LoadSpec], t: float = 1.0):
        loads = tuple(loads)
        if not loads:
            raise ValueError("a grid study needs at least one load")
        labels = [ld.label for ld in loads]
        if len(set(labels)) != len(labels):
            raise ValueError("load labels must be unique")
        object.__setattr__(self, "loads", loads)
        object.__setattr__(self, "t", float(t))


def forced_outage_rate(ft: FtExpr, rates: Union[Mapping[str, float], Iterable[BasicEvent]],
                       t: float) -> float:
    """Probability that the plant's fault tree top event has occurred by ``t``."""
    if isinstance(rates, Mapping):
        events = [BasicEvent(e, Exponential(r)) for e, r in rates.items()]
    else:
        events = list(rates)
    return ft_prob_closed(ft, instantiate(events, t))


def partial_blackout_prob(gen_fors: Sequence[float]) -> float:
    """Probability that exactly one of the independent supplies is out."""
    fors = [float(q) for q in gen_fors]
    for q in fors:
        if not (0.0 <= q <= 1.0):
            raise InvalidProbability(f"forced outage rate {q!r} outside [0, 1]")
    return math.fsum(
        q * math.prod(1.0 - r for j, r in enumerate(fors) if j != i)
        for i, q in enumerate(fors)
    )


def saidi(study: GridStudy, load_probs: Mapping[str, float]) -> float:
    """Customer-weighted mean interruption duration, hours per customer."""
    for ld in study.loads:
        if ld.label not in load_probs:
            raise MissingLoadProb(f"no failure probability for load {ld.label!r}")
    total = sum(ld.customers for ld in study.loads)
    if total <= 0:
        raise ZeroCustomers("total customer count is zero")
    num = math.fsum(load_probs[ld.label] * ld.mttr * ld.customers for ld in study.loads)
    return num / total


def exactly_one_trees(cbox: ConsequenceBox) -> Optional[list[FtExpr]]:
    """The supply trees if ``cbox`` is 'exactly one supply fails', else None.

    Recognized when the box has one path per tree, each answering NO for
    that tree and YES for all the others.
    """
    trees: list[FtExpr] = []
    for p in cbox.paths:
        for b in p.relevant():
            if b.failure not in trees:
                trees.append(b.failure)
    if not trees or len(cbox.paths) != len(trees):
        return None
    seen_no = set()
    for p in cbox.paths:
        rel = p.relevant()
        if len(rel) != len(trees) or {b.failure for b in rel} != set(trees):
            return None
        nos = [b.failure for b in rel if b.selector == Selector.NO]
        if len(nos) != 1:
            return None
        seen_no.add(nos[0])
    return trees if len(seen_no) == len(trees) else None


@dataclass
class LoadResult:
    label: str
    consequence: str
    probability: float
    mttr_h: float
    customers: int
    term: float
    stderr: Optional[float] = None

    def to_dict(self) -> dict:
        d = {
            "label": self.label,
            "consequence": self.consequence,
            "probability": self.probability,
            "mttr_h": self.mttr_h,
            "customers": self.customers,
            "term": self.term,
        }
        if self.stderr is not None:
            d["stderr"] = self.stderr
        return d


@dataclass
class SaidiReport:
    saidi_hours: float
    loads: list[LoadResult]
    t_years: float
    method: str
    samples: Optional[int] = None
    seed: Optional[int] = None
    cross_checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "saidi_hours": self.saidi_hours,
            "loads": [ld.to_dict() for ld in self.loads],
            "t_years": self.t_years,
            "method": self.method,
            "cross_checks": dict(self.cross_checks),
        }
        if self.samples is not None:
            d["samples"] = self.samples
            d["seed"] = self.seed
        return d


def load_probability(cbox: ConsequenceBox, assign: Mapping[str, float], method: str,
                     samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED):
    """(probability, stderr or None) of a load's failure consequence."""
    if method == "closed":
        return box_prob_closed(cbox, assign), None
    if method == "oracle":
        return oracle_prob(cbox, assign), None
    if method == "mcs":
        est = mcs_estimate(cbox, assign, n=samples, seed=seed)
        return est.mean, est.stderr
    if method == "exactly-one":
        trees = exactly_one_trees(cbox)
        if trees is None:
            raise ValueError(f"consequence {cbox.label!r} is not an exactly-one-fails box")
        return partial_blackout_prob([ft_prob_closed(ft, assign) for ft in trees]), None
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def saidi_full(study: GridStudy, model, t: Optional[float] = None, method: str = "closed",
               samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
               cross_check: bool = True) -> SaidiReport:
    """SAIDI with a per-load breakdown.

    ``model`` must provide ``consequence(name)`` and ``assignment(t)``.
    With ``cross_check`` the deterministic routes that apply to every load
    are evaluated too and recorded in ``cross_checks``.
    """
    t = study.t if t is None else float(t)
    assign = model.assignment(t)
    boxes = {ld.label: model.consequence(ld.consequence) for ld in study.loads}
    results = []
    for k, ld in enumerate(study.loads):
        # each load gets its own substream family so loads stay independent
        p, se = load_probability(boxes[ld.label], assign, method, samples, seed + k)
        results.append(LoadResult(ld.label, ld.consequence, p, ld.mttr, ld.customers,
                                  p * ld.mttr * ld.customers, se))
    value = saidi(study, {r.label: r.probability for r in results})
    report = SaidiReport(value, results, t, method,
                         samples if method == "mcs" else None,
                         seed if method == "mcs" else None)
    if cross_check:
        for other in ("closed", "oracle", "exactly-one"):
            if other == method:
                continue
            if other == "exactly-one" and not all(
                    exactly_one_trees(b) is not None for b in boxes.values()):
                continue
            try:
                probs = {ld.label: load_probability(boxes[ld.label], assign, other)[0]
                         for ld in study.loads}
            except Exception as exc:  # a route may be infeasible for this model
                report.cross_checks[other] = {"error": str(exc)}
                continue
            report.cross_checks[other] = {"saidi_hours": saidi(study, probs)}
    return report
