"""Decision boxes, paths and consequence boxes.

Named fixtures pin every selector case of the two-box laws (AND/OR,
AND/AND, OR/OR), representative four-box cases, and the homogeneous
N-box types A, B and C against the enumeration oracle.
"""

import itertools
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccdrel.ccd import (
    ConsequenceBox,
    ConsequencePath,
    DecisionBox,
    Selector,
    box_prob_closed,
    box_semantics,
    build_homogeneous_path,
    dec_box_semantics,
    full_expansion,
    path_prob_closed,
    path_semantics,
    reduce,
    reduce_report,
    type_formula,
    validate_box,
)
from ccdrel.errors import DuplicatePath, EmptyPath, NotDisjoint, SharedLeafAcrossBoxes, UnknownEvent
from ccdrel.faulttree import And, Atomic, Or
from ccdrel.oracle import oracle_prob
from ccdrel.space import build_space, prob
from generators import random_boxes, random_ccd

NO, YES, SKIP = Selector.NO, Selector.YES, Selector.IRRELEVANT
TOL = 1e-12


def atoms(prefix, ps):
    return [Atomic(f"{prefix}{i}") for i in range(len(ps))], {f"{prefix}{i}": p for i, p in enumerate(ps)}


def and_fail(ps):
    return math.prod(ps)


def or_fail(ps):
    return 1 - math.prod(1 - p for p in ps)


def outcome(fail, sel):
    return fail if sel == NO else 1 - fail if sel == YES else 1.0


def test_selector_codes():
    assert Selector.from_code(0) is NO
    assert Selector.from_code(1) is YES
    for c in (2, 3, -1, 99):
        assert Selector.from_code(c) is SKIP


# --- single box -------------------------------------------------------------

def test_box_semantics_cases():
    s = build_space({"a": 0.2, "b": 0.3})
    ft = Or([Atomic("a"), Atomic("b")])
    assert dec_box_semantics(DecisionBox("B", ft, SKIP), s) == s.full()
    assert prob(s, dec_box_semantics(DecisionBox("B", Atomic("a"), NO), s)) == pytest.approx(0.2)
    assert prob(s, dec_box_semantics(DecisionBox("B", ft, YES), s)) == pytest.approx(0.56, abs=TOL)


@pytest.mark.parametrize("gate,law", [(Or, or_fail), (And, and_fail)], ids=["or", "and"])
@pytest.mark.parametrize("sel", [NO, YES, SKIP], ids=["no", "yes", "skip"])
def test_one_box(gate, law, sel):
    ps = [0.2, 0.3, 0.45]
    leaves, assign = atoms("c", ps)
    path = ConsequencePath("p", [DecisionBox("X", gate(leaves), sel)])
    expected = outcome(law(ps), sel)
    assert path_prob_closed(path, assign) == pytest.approx(expected, abs=TOL)
    assert oracle_prob(path, assign) == pytest.approx(expected, abs=TOL)


def test_two_component_or_example():
    # system fails if either component fails: YES is (1 - p1)(1 - p2)
    leaves, assign = atoms("C", [0.1, 0.25])
    ft = Or(leaves)
    yes = ConsequencePath("y", [DecisionBox("S", ft, YES)])
    assert oracle_prob(yes, assign) == pytest.approx(0.9 * 0.75, abs=TOL)


# --- two boxes: every selector pair for each gate pairing ---------------------

TWO_BOX = {
    "and_or": (And, and_fail, Or, or_fail),
    "and_and": (And, and_fail, And, and_fail),
    "or_or": (Or, or_fail, Or, or_fail),
    "or_and": (Or, or_fail, And, and_fail),
}
SEL_PAIRS = [(x, y) for x in (NO, YES) for y in (NO, YES)] + [(NO, SKIP), (YES, SKIP)]
SEL_PAIRS_EXTRA = [(SKIP, NO), (SKIP, YES), (SKIP, SKIP)]


@pytest.mark.parametrize("pair", list(TWO_BOX))
@pytest.mark.parametrize("x,y", SEL_PAIRS + SEL_PAIRS_EXTRA,
                         ids=[f"{int(a)}{int(b)}" for a, b in SEL_PAIRS + SEL_PAIRS_EXTRA])
def test_two_box_case(pair, x, y):
    g1, law1, g2, law2 = TWO_BOX[pair]
    n_ps, m_ps = [0.2, 0.3, 0.6], [0.1, 0.4]
    fn, an = atoms("n", n_ps)
    fm, am = atoms("m", m_ps)
    assign = {**an, **am}
    path = ConsequencePath("p", [DecisionBox("X", g1(fn), x), DecisionBox("Y", g2(fm), y)])
    expected = outcome(law1(n_ps), x) * outcome(law2(m_ps), y)
    assert path_prob_closed(path, assign) == pytest.approx(expected, abs=TOL)
    assert oracle_prob(path, assign) == pytest.approx(expected, abs=TOL)


def test_and_or_example_value():
    fn, an = atoms("n", [0.2, 0.3])
    fm, am = atoms("m", [0.1, 0.4])
    path = ConsequencePath("p", [DecisionBox("X", And(fn), NO), DecisionBox("Y", Or(fm), NO)])
    assert oracle_prob(path, {**an, **am}) == pytest.approx(0.06 * 0.46, abs=TOL)


# --- four boxes: AND-OR-AND-OR with representative selector vectors ----------

FOUR_BOX_CASES = [
    (0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 1), (1, 0, 1, 0),
    (1, 1, 1, 1), (1, 1, 2, 2), (1, 2, 2, 2), (0, 2, 2, 2), (0, 1, 2, 2),
    (2, 2, 2, 2),
]


@pytest.mark.parametrize("order", ["and_or_and_or", "or_and_or_and", "and_and_or_or", "or_or_and_and"])
@pytest.mark.parametrize("codes", FOUR_BOX_CASES, ids=["".join(map(str, c)) for c in FOUR_BOX_CASES])
def test_four_box_case(order, codes):
    gates = {"and": (And, and_fail), "or": (Or, or_fail)}
    groups = [[0.3, 0.5], [0.1, 0.2, 0.05], [0.7, 0.9], [0.25, 0.15]]
    boxes, assign, expected = [], {}, 1.0
    for i, (name, ps, code) in enumerate(zip(order.split("_"), groups, codes)):
        gate, law = gates[name]
        leaves, a = atoms(f"g{i}_", ps)
        assign.update(a)
        sel = Selector.from_code(code)
        boxes.append(DecisionBox(f"B{i}", gate(leaves), sel))
        expected *= outcome(law(ps), sel)
    path = ConsequencePath("p", boxes)
    assert path_prob_closed(path, assign) == pytest.approx(expected, abs=TOL)
    assert oracle_prob(path, assign) == pytest.approx(expected, abs=TOL)


# --- homogeneous N-box paths: types A, B, C --------------------------------------

G1, G2, G3 = [0.2, 0.3], [0.1, 0.4], [0.5, 0.6, 0.7]

TYPE_CASES = {
    # type A: AND boxes
    "A1_all_no": ("A", dict(no_groups=[G1, G2, G3])),
    "A2_all_yes": ("A", dict(yes_groups=[G1, G2, G3])),
    "A3_mixed": ("A", dict(no_groups=[G1], yes_groups=[G2, G3])),
    # type B: OR boxes
    "B1_all_no": ("B", dict(no_groups=[G1, G2, G3])),
    "B2_all_yes": ("B", dict(yes_groups=[G1, G2, G3])),
    "B3_mixed": ("B", dict(no_groups=[G1, G3], yes_groups=[G2])),
    # type C: AND and OR boxes together
    "C1_and_no_or_no": ("C", dict(no_groups=[G1], or_no_groups=[G2])),
    "C2_and_yes_or_yes": ("C", dict(yes_groups=[G1], or_yes_groups=[G2])),
    "C3_and_no_or_yes": ("C", dict(no_groups=[G1], or_yes_groups=[G2])),
    "C4_and_yes_or_no": ("C", dict(yes_groups=[G1], or_no_groups=[G2])),
    "C5_and_mixed_or_no": ("C", dict(no_groups=[G1], yes_groups=[G3], or_no_groups=[G2])),
    "C6_and_mixed_or_yes": ("C", dict(no_groups=[G1], yes_groups=[G3], or_yes_groups=[G2])),
    "C7_and_no_or_mixed": ("C", dict(no_groups=[G1], or_no_groups=[G2], or_yes_groups=[G3])),
    "C8_and_yes_or_mixed": ("C", dict(yes_groups=[G1], or_no_groups=[G2], or_yes_groups=[G3])),
    "C9_all_mixed": ("C", dict(no_groups=[G1], yes_groups=[G2], or_no_groups=[G3], or_yes_groups=[G1])),
}


@pytest.mark.parametrize("case", list(TYPE_CASES))
def test_type_case(case):
    kind, groups = TYPE_CASES[case]
    hp = build_homogeneous_path(kind, **groups)
    if kind == "B":
        expected = type_formula(or_no=groups.get("no_groups", ()), or_yes=groups.get("yes_groups", ()))
    else:
        expected = type_formula(and_no=groups.get("no_groups", ()), and_yes=groups.get("yes_groups", ()),
                                or_no=groups.get("or_no_groups", ()), or_yes=groups.get("or_yes_groups", ()))
    assert path_prob_closed(hp.path, hp.assignment) == pytest.approx(expected, abs=TOL)
    assert oracle_prob(hp.path, hp.assignment) == pytest.approx(expected, abs=TOL)


def test_type_examples():
    a = build_homogeneous_path("A", no_groups=[[0.2, 0.3], [0.1, 0.4]])
    assert oracle_prob(a.path, a.assignment) == pytest.approx(0.0024, abs=TOL)
    b = build_homogeneous_path("B", yes_groups=[[0.2, 0.3]])
    assert oracle_prob(b.path, b.assignment) == pytest.approx(0.56, abs=TOL)
    c = build_homogeneous_path("C", no_groups=[[0.2, 0.3]], or_yes_groups=[[0.1, 0.4]])
    assert oracle_prob(c.path, c.assignment) == pytest.approx(0.0324, abs=TOL)
    a2 = build_homogeneous_path("A", yes_groups=[[0.1, 0.1], [0.1, 0.1]])
    assert path_prob_closed(a2.path, a2.assignment) == pytest.approx(0.9801, abs=TOL)


def test_type_argument_errors():
    with pytest.raises(ValueError):
        build_homogeneous_path("D")
    with pytest.raises(ValueError):
        build_homogeneous_path("A", or_no_groups=[[0.1]])


@given(st.integers(0, 10**9))
def test_type_formula_random(seed):
    rng = random.Random(seed)
    def groups(k):
        return [[rng.random() for _ in range(rng.randint(1, 3))] for _ in range(k)]
    g = dict(no_groups=groups(rng.randint(0, 2)), yes_groups=groups(rng.randint(0, 2)),
             or_no_groups=groups(rng.randint(0, 1)), or_yes_groups=groups(rng.randint(0, 1)))
    if not any(g.values()):
        g["no_groups"] = groups(1)
    hp = build_homogeneous_path("C", **g)
    expected = type_formula(g["no_groups"], g["yes_groups"], g["or_no_groups"], g["or_yes_groups"])
    assert oracle_prob(hp.path, hp.assignment) == pytest.approx(expected, abs=TOL)


# --- paths -------------------------------------------------------------------

def test_path_examples():
    assign = {"a": 0.2, "b": 0.3}
    p = ConsequencePath("p", [DecisionBox("A", Atomic("a"), NO), DecisionBox("B", Atomic("b"), YES)])
    assert oracle_prob(p, assign) == pytest.approx(0.14, abs=TOL)
    s = build_space(assign)
    assert path_semantics(ConsequencePath("q", [DecisionBox("A", Atomic("a"), SKIP)]), s) == s.full()
    assert path_prob_closed(ConsequencePath("r", [DecisionBox("A", Atomic("a"), SKIP)] * 3), assign) == 1.0


def test_mcc_path(mcc_reduced):
    p = mcc_reduced.path("P3")
    assert oracle_prob(p, mcc_reduced.assignment()) == pytest.approx(0.009, abs=TOL)


def test_empty_path():
    with pytest.raises(EmptyPath):
        path_prob_closed(ConsequencePath("p", []), {})
    with pytest.raises(EmptyPath):
        path_semantics(ConsequencePath("p", []), build_space({}))


def test_shared_leaf_across_boxes():
    p = ConsequencePath("p", [DecisionBox("A", Atomic("a"), NO),
                              DecisionBox("B", Or([Atomic("a"), Atomic("b")]), YES)])
    with pytest.raises(SharedLeafAcrossBoxes):
        path_prob_closed(p, {"a": 0.5, "b": 0.5})
    # the oracle still answers: a AND NOT(a OR b) is impossible
    assert oracle_prob(p, {"a": 0.5, "b": 0.5}) == 0.0


def test_shared_leaf_ignored_when_box_skipped():
    p = ConsequencePath("p", [DecisionBox("A", Atomic("a"), NO), DecisionBox("B", Atomic("a"), SKIP)])
    assert path_prob_closed(p, {"a": 0.3}) == pytest.approx(0.3)


@given(st.integers(0, 10**9))
def test_selector_flip(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 10)
    boxes, ids = random_boxes(rng, n, rng.randint(1, min(3, n)))
    assign = {e: rng.uniform(0.05, 0.95) for e in ids}
    sels = [rng.choice([YES, NO, SKIP]) for _ in boxes]
    k = rng.randrange(len(boxes))
    sels[k] = YES
    path = ConsequencePath("p", [DecisionBox(b, ft, s) for (b, ft), s in zip(boxes, sels)])
    flipped = ConsequencePath("p", [DecisionBox(b, ft, NO if i == k else s)
                                    for i, ((b, ft), s) in enumerate(zip(boxes, sels))])
    from ccdrel.faulttree import ft_prob_closed
    q = ft_prob_closed(boxes[k][1], assign)
    if not 1e-9 < q < 1 - 1e-9:
        return
    before, after = path_prob_closed(path, assign), path_prob_closed(flipped, assign)
    assert after == pytest.approx(before * q / (1 - q), rel=1e-9, abs=1e-15)


# --- consequence boxes --------------------------------------------------------

def test_mcc_boxes(mcc_reduced):
    a = mcc_reduced.assignment()
    ms, mr = box_prob_closed(mcc_reduced.consequence("MS"), a), box_prob_closed(mcc_reduced.consequence("MR"), a)
    assert ms == pytest.approx(0.999, abs=TOL)
    assert mr == pytest.approx(0.001, abs=TOL)
    assert ms + mr == pytest.approx(1.0, abs=TOL)


def test_empty_box_is_zero(caplog):
    assert box_prob_closed(ConsequenceBox("E", []), {}) == 0.0
    assert "no paths" in caplog.text


def test_all_skip_path_box_is_one():
    cb = ConsequenceBox("C", [ConsequencePath("p", [DecisionBox("A", Atomic("a"), SKIP)])])
    assert box_prob_closed(cb, {"a": 0.4}) == 1.0


def test_duplicate_path():
    p = ConsequencePath("p", [DecisionBox("A", Atomic("a"), NO)])
    q = ConsequencePath("q", [DecisionBox("A", Atomic("a"), NO)])
    with pytest.raises(DuplicatePath):
        box_prob_closed(ConsequenceBox("C", [p, q]), {"a": 0.4})
    assert any(d.code == "DuplicatePath" for d in validate_box(ConsequenceBox("C", [p, q])))


def test_nested_paths_not_disjoint():
    p = ConsequencePath("p", [DecisionBox("A", Atomic("a"), NO)])
    q = ConsequencePath("q", [DecisionBox("A", Atomic("a"), NO), DecisionBox("B", Atomic("b"), YES)])
    cb = ConsequenceBox("C", [p, q])
    with pytest.raises(NotDisjoint):
        box_prob_closed(cb, {"a": 0.4, "b": 0.5})
    s = build_space({"a": 0.4, "b": 0.5})
    assert any(d.code == "NotDisjoint" for d in validate_box(cb, s))
    assert any(d.code == "DisjointnessUnverified" for d in validate_box(cb))


def test_disjoint_by_enumeration_only():
    # different trees that happen to be exclusive: a and NOT a
    p = ConsequencePath("p", [DecisionBox("A", Atomic("a"), NO)])
    q = ConsequencePath("q", [DecisionBox("NA", Or([Atomic("a")]), YES)])
    assert box_prob_closed(ConsequenceBox("C", [p, q]), {"a": 0.3}) == pytest.approx(1.0)


def test_missing_probability():
    p = ConsequencePath("p", [DecisionBox("A", Atomic("a"), NO)])
    q = ConsequencePath("q", [DecisionBox("B", Atomic("b"), NO)])
    with pytest.raises(UnknownEvent):
        box_prob_closed(ConsequenceBox("C", [p, q]), {"a": 0.3})


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_full_expansion_partitions(k):
    boxes = [(f"B{i}", Or([Atomic(f"x{i}"), Atomic(f"y{i}")])) for i in range(k)]
    cb = full_expansion("ALL", boxes)
    assign = {f"{c}{i}": 0.1 + 0.2 * i for i in range(k) for c in "xy"}
    assert len(cb.paths) == 2 ** k
    assert box_prob_closed(cb, assign) == pytest.approx(1.0, abs=TOL)
    assert validate_box(cb, build_space(assign)) == []


@given(st.integers(0, 10**9))
def test_random_ccd_matches_oracle(seed):
    ccd, assign = random_ccd(random.Random(seed))
    total = 0.0
    for cb in ccd:
        closed = box_prob_closed(cb, assign)
        assert closed == pytest.approx(oracle_prob(cb, assign), abs=TOL)
        for p in cb.paths:
            assert path_prob_closed(p, assign) == pytest.approx(oracle_prob(p, assign), abs=TOL)
        total += closed
    assert total == pytest.approx(1.0, abs=TOL)


# --- reduction ----------------------------------------------------------------

def test_reduce_drops_skips_and_flags_empty(caplog):
    a = DecisionBox("A", Atomic("a"), NO)
    p = ConsequencePath("p", [a, DecisionBox("B", Atomic("b"), SKIP)])
    q = ConsequencePath("q", [DecisionBox("B", Atomic("b"), SKIP)])
    red = reduce_report([ConsequenceBox("C", [p, q])])
    assert red.boxes[0].paths == (ConsequencePath("p", [a]),)
    assert red.dropped_boxes == [("C", "p", "B"), ("C", "q", "B")]
    assert red.dropped_paths == [("C", "q")]
    assert "only irrelevant" in caplog.text


def test_reduce_identity_without_skips(mcc_reduced):
    ccd = mcc_reduced.ccd()
    assert reduce(ccd) == ccd


@given(st.integers(0, 10**9))
def test_reduction_preserves_semantics(seed):
    ccd, assign = random_ccd(random.Random(seed))
    s = build_space(assign)
    for before, after in zip(ccd, reduce(ccd)):
        assert before.label == after.label
        assert box_semantics(before, s) == box_semantics(after, s)
