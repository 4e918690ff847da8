import math
import random

import numpy as np
import pytest

from ccdrel.ccd import ConsequencePath, DecisionBox, Selector
from ccdrel.errors import NonPositiveRate, UnknownEvent
from ccdrel.faulttree import And, Atomic, Not, Or, ft_prob_closed
from ccdrel.montecarlo import (
    ALGORITHM,
    CHUNK,
    McsEstimate,
    merge_estimates,
    mcs_estimate,
    renewal_unavailability,
    time_to_event,
    ttf_ttr_study,
)
from generators import probs_for, read_once_ft


def test_half_probability_concentrates():
    est = mcs_estimate(Atomic("a"), {"a": 0.5}, n=100_000, seed=7)
    assert abs(est.mean - 0.5) <= 3 * est.stderr


def test_estimate_fields():
    est = mcs_estimate(Or([Atomic("a"), Atomic("b")]), {"a": 0.2, "b": 0.3}, n=5000, seed=1)
    assert est.n == 5000 and est.seed == 1 and est.algorithm == ALGORITHM
    assert est.stderr == pytest.approx(math.sqrt(est.mean * (1 - est.mean) / est.n))
    assert est.ci95[0] <= est.mean <= est.ci95[1]
    assert set(est.to_dict()) == {"mean", "stderr", "n", "seed", "ci95", "algorithm"}


def test_single_sample():
    for seed in range(5):
        assert mcs_estimate(Atomic("a"), {"a": 0.5}, n=1, seed=seed).mean in (0.0, 1.0)


def test_degenerate_probabilities():
    assert mcs_estimate(Atomic("a"), {"a": 0.0}, n=1000).mean == 0.0
    assert mcs_estimate(Atomic("a"), {"a": 1.0}, n=1000).mean == 1.0
    assert mcs_estimate(And(), {}, n=10).mean == 1.0


def test_bit_identical_reruns():
    ft = Or([And([Atomic("a"), Atomic("b")]), Not(Atomic("c"))])
    assign = {"a": 0.3, "b": 0.6, "c": 0.9}
    runs = [mcs_estimate(ft, assign, n=150_000, seed=99) for _ in range(2)]
    assert runs[0] == runs[1]


def test_workers_do_not_change_result():
    ft = Or([Atomic("a"), Atomic("b")])
    assign = {"a": 0.1, "b": 0.05}
    n = 3 * CHUNK + 17
    assert mcs_estimate(ft, assign, n, seed=3, workers=1) == mcs_estimate(ft, assign, n, seed=3, workers=4)


def test_different_seeds_differ():
    a = mcs_estimate(Atomic("a"), {"a": 0.5}, n=10_000, seed=1)
    b = mcs_estimate(Atomic("a"), {"a": 0.5}, n=10_000, seed=2)
    assert a.hits != b.hits


def test_merge_matches_concatenated_sample():
    # independent substreams, merged, behave like one sample of the total size
    ft, assign = Atomic("a"), {"a": 0.3}
    parts = [mcs_estimate(ft, assign, n=20_000, seed=s) for s in range(10)]
    merged = merge_estimates(parts, seed=0)
    assert merged.n == 200_000
    assert abs(merged.mean - 0.3) <= 3 * merged.stderr
    means = np.array([p.mean for p in parts])
    assert means.var(ddof=1) == pytest.approx(0.3 * 0.7 / 20_000, rel=0.8)


def test_path_targets():
    p = ConsequencePath("p", [DecisionBox("A", Atomic("a"), Selector.NO),
                              DecisionBox("B", Atomic("b"), Selector.YES),
                              DecisionBox("C", Atomic("c"), Selector.IRRELEVANT)])
    est = mcs_estimate(p, {"a": 0.4, "b": 0.5}, n=100_000, seed=5)
    assert abs(est.mean - 0.2) <= 4 * est.stderr


def test_errors():
    with pytest.raises(UnknownEvent):
        mcs_estimate(Atomic("a"), {}, n=10)
    with pytest.raises(ValueError):
        mcs_estimate(Atomic("a"), {"a": 0.5}, n=0)
    with pytest.raises(TypeError):
        mcs_estimate(object(), {}, n=10)


def test_calibration_small_corpus():
    rng = random.Random(11)
    inside = 0
    for k in range(20):
        ids = [f"x{i}" for i in range(rng.randint(1, 8))]
        ft = read_once_ft(rng, ids)
        assign = probs_for(rng, ids, 0.05, 0.95)
        truth = ft_prob_closed(ft, assign)
        est = mcs_estimate(ft, assign, n=20_000, seed=1000 + k)
        se = math.sqrt(truth * (1 - truth) / est.n)
        inside += abs(est.mean - truth) <= 4 * se + 1e-15
    assert inside >= 19


# --- renewal study --------------------------------------------------------------

def test_time_to_event():
    assert time_to_event(0.5, 0.5) == pytest.approx(1.3862943611198906)


def test_renewal_symmetric_rates():
    # equal up and down rates: long-run unavailability one half
    lam, horizon = 0.01, 1e5 / 0.01
    est = ttf_ttr_study(lam, lam, horizon, seed=4)
    n_cycles = lam * horizon / 2
    sigma = math.sqrt(1 / (8 * n_cycles))
    assert abs(est.unavailability - 0.5) <= 3 * sigma
    assert renewal_unavailability(lam, lam) == 0.5


def test_renewal_corrected_mode():
    # rate 0.001 per hour, mean repair 10 h: about 10 / 1010
    est = ttf_ttr_study(0.001, 10.0, 2e7, seed=8, corrected=True)
    expected = renewal_unavailability(0.001, 10.0, corrected=True)
    assert expected == pytest.approx(10 / 1010)
    assert est.unavailability == pytest.approx(expected, rel=0.05)
    assert est.to_dict()["ttr_mode"] == "mean-time"


def test_renewal_small_failure_rate():
    est = ttf_ttr_study(1e-9, 1.0, 1000.0, seed=2)
    assert est.unavailability < 1e-3


def test_renewal_deterministic():
    a = ttf_ttr_study(0.2, 0.5, 5000.0, seed=12)
    b = ttf_ttr_study(0.2, 0.5, 5000.0, seed=12)
    assert a == b
    assert 0.0 <= a.unavailability <= 1.0


@pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 1), (-1, 1, 1), (1, -1, 1)])
def test_renewal_rejects_nonpositive(args):
    with pytest.raises(NonPositiveRate):
        ttf_ttr_study(*args)


def test_renewal_rejects_bad_horizon():
    with pytest.raises(ValueError):
        ttf_ttr_study(1, 1, 0)


def test_estimate_from_counts():
    e = McsEstimate.from_counts(0, 10, 1)
    assert e.mean == 0.0 and e.stderr == 0.0 and e.ci95 == (0.0, 0.0)
