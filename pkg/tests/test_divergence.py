import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divseries.core import INF, Exponent, PreconditionError, pnorm, solve_r
from divseries.divergence import (
    BlockPlan,
    OperatorFamily,
    WeightSpec,
    build_divergence_witness_T1,
    build_divergence_witness_T2,
    classify,
    default_schedule,
    hypothesis_probe,
    partial_sums,
    perturbation_density_check,
    rademacher_signs,
)
from divseries.operators import SearchBudget, operator_norm

ONES = OperatorFamily("diagonal", WeightSpec("constant", {"value": 1.0}))
GEOM = OperatorFamily("diagonal", WeightSpec("geometric", {"ratio": 0.5}))
LOG = OperatorFamily("diagonal", WeightSpec("log", {"c": 2.0}))


# -- weights and probes --------------------------------------------------------

def test_weight_kinds():
    assert np.array_equal(WeightSpec("explicit", {"values": [3, 2]}).values(4), [3, 2, 0, 0])
    assert np.allclose(WeightSpec("power", {"alpha": 2}).values(3), [1, 1 / 4, 1 / 9], rtol=1e-15)
    assert np.allclose(WeightSpec("log").values(2), [1 / math.log(3), 1 / math.log(4)], rtol=1e-15)
    assert np.array_equal(WeightSpec("geometric", {"ratio": 0.5}).values(3), [0.5, 0.25, 0.125])
    with pytest.raises(ValueError):
        WeightSpec("bogus")
    with pytest.raises(ValueError):
        WeightSpec("explicit", {"values": [-1]})


def test_probe_examples():
    rep = hypothesis_probe(ONES, 2)
    assert rep.sums == (10.0, 100.0, 1000.0, 10000.0, 100000.0)
    assert rep.verdict == "growing" and rep.slope == pytest.approx(1.0)
    geo = hypothesis_probe(GEOM, 2)
    assert geo.sums[-1] == pytest.approx(1 / 3, rel=1e-15)
    assert geo.verdict == "bounded-so-far"
    for r in (2, 3, 4):
        assert hypothesis_probe(LOG, r).verdict == "growing"


def test_probe_at_infinity_is_running_max():
    fam = OperatorFamily("diagonal", WeightSpec("explicit", {"values": [1, 3, 2]}), k_max=3)
    assert hypothesis_probe(fam, INF, [1, 2, 3]).sums == (1.0, 3.0, 3.0)


def test_classify_thresholds():
    assert classify([10, 100], [1.0, 1.0])[1] == "bounded-so-far"
    assert classify([10, 100], [1.0, 10.0])[1] == "growing"
    assert classify([10, 100], [1.0, 1.2])[1] == "inconclusive"
    assert classify([10, 100], [1.0, 1.2], target=1.1)[1] == "growing"
    assert classify([10, 100], [0.0, 0.0])[1] == "bounded-so-far"


def test_partial_sums_examples():
    fam = OperatorFamily("diagonal", WeightSpec("constant"), k_max=10_000)
    assert partial_sums(fam, np.zeros(10), 1).sums == (0.0,) * 4
    e1 = np.zeros(10)
    e1[0] = -2.5
    assert partial_sums(fam, e1, 1).sums == (2.5,) * 4
    for N in (100, 10_000):
        x = np.full(N, 1 / math.sqrt(N))
        assert partial_sums(fam, x, 1, [N]).sums[0] == pytest.approx(math.sqrt(N), rel=1e-12)


def test_partial_sums_domain_mismatch():
    fam = OperatorFamily("diagonal", WeightSpec("constant"), k_max=5)
    with pytest.raises(ValueError):
        partial_sums(fam, np.ones(6), 1)


finite_p = st.sampled_from([Exponent(1), Exponent(1.5), Exponent(2), Exponent(3)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), finite_p, st.floats(-8, 8).filter(lambda v: v != 0))
def test_homogeneity(seed, p, lam):
    fam = OperatorFamily("diagonal", WeightSpec("power", {"alpha": 0.3}), k_max=1000)
    x = np.random.default_rng(seed).standard_normal(1000)
    base = partial_sums(fam, x, p, [10, 100, 1000]).sums
    scaled = partial_sums(fam, lam * x, p, [10, 100, 1000]).sums
    for a, b in zip(base, scaled):
        assert b == pytest.approx(abs(lam) ** float(p) * a, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([Exponent(1), Exponent(2.5), INF]))
def test_partial_sums_are_monotone(seed, p):
    fam = OperatorFamily("random", WeightSpec("constant"), k_max=40, dim=3, rows=2)
    x = np.random.default_rng(seed).standard_normal(3)
    sums = partial_sums(fam, x, p, range(1, 41)).sums
    assert all(a <= b for a, b in zip(sums, sums[1:]))


def test_rademacher_family_norms_are_the_weights():
    fam = OperatorFamily("rademacher", WeightSpec("power", {"alpha": 1}), s=3, depth=6)
    for k in range(1, 7):
        assert operator_norm(fam.operator(k)).estimate == pytest.approx(1 / k, rel=1e-12)


def test_random_family_is_normalised_and_seeded():
    fam = OperatorFamily("random", WeightSpec("power", {"alpha": 1}), k_max=5, seed=3)
    assert np.allclose(fam.norms(5), 1 / np.arange(1, 6), rtol=1e-9)
    again = OperatorFamily("random", WeightSpec("power", {"alpha": 1}), k_max=5, seed=3)
    assert fam.operator(4) == again.operator(4)


# -- Theorem 1 builder ---------------------------------------------------------

def test_T1_diagonal_example():
    fam = OperatorFamily("diagonal", WeightSpec("constant"), k_max=100_000)
    x0, rep = build_divergence_witness_T1(fam, 1, 2, target=100.0)
    assert pnorm(x0, 2) == pytest.approx(1.0, abs=1e-12)
    assert rep.verdict == "growing"
    assert rep.sums[-1] >= 100.0
    assert rep.notes["block_end"] <= 100_000


def test_T1_refuses_geometric_and_zero_families():
    with pytest.raises(PreconditionError):
        build_divergence_witness_T1(GEOM, 1, 2)
    zero = OperatorFamily("diagonal", WeightSpec("constant", {"value": 0.0}))
    with pytest.raises(PreconditionError):
        build_divergence_witness_T1(zero, 1, 2)


def test_T1_refuses_p_outside_range():
    with pytest.raises(PreconditionError):
        build_divergence_witness_T1(ONES, 3, 2)


def test_T1_report_is_rederivable():
    fam = OperatorFamily("diagonal", WeightSpec("log"), k_max=100_000)
    x0, rep = build_divergence_witness_T1(fam, 1, 2, target=20.0)
    again = partial_sums(fam, x0, 1, rep.checkpoints, rep.target)
    assert again.sums == rep.sums


def test_T1_gliding_hump_on_random_family():
    fam = OperatorFamily("random", WeightSpec("constant"), k_max=256, dim=4, rows=2, seed=1)
    budget = SearchBudget(starts=4, iterations=200)
    x0, rep = build_divergence_witness_T1(fam, 1, 2, target=5.0, budget=budget,
                                          checkpoints=[16, 64, 256])
    assert rep.notes["method"] == "gliding-hump"
    assert rep.notes["humps"]
    assert pnorm(x0, 2) == pytest.approx(1.0, abs=1e-12)
    assert rep.sums[-1] >= 5.0
    assert partial_sums(fam, x0, 1, rep.checkpoints, rep.target).sums == rep.sums


def test_monotone_embedding_on_witness():
    fam = OperatorFamily("diagonal", WeightSpec("constant"), k_max=100_000)
    x0, _ = build_divergence_witness_T1(fam, 1, 2, target=100.0)
    terms = fam.images(x0, 100_000)
    y = x0 / terms.max()  # all summands <= 1
    s1 = partial_sums(fam, y, 1).sums
    s2 = partial_sums(fam, y, 2).sums
    assert all(a >= b for a, b in zip(s1, s2))


# -- Theorem 2 builder ---------------------------------------------------------

def test_default_schedule():
    assert default_schedule(Exponent(2), 3) == [Exponent(1.5), Exponent(1.75), Exponent(1.875)]


def test_T2_log_family_example():
    fam = OperatorFamily("diagonal", WeightSpec("log"), k_max=100_000)
    x0, plan, rep = build_divergence_witness_T2(fam, 2, 2, targets=(1, 2, 3))
    assert len(plan.ends) == 4 and plan.complete
    assert rep.all_met
    for n, target in enumerate((1, 2, 3), start=1):
        lo, hi = plan.block(n)
        val = pnorm(fam.images(x0, hi)[lo:hi], plan.p_schedule[n - 1])
        assert val >= target * (1 - 1e-12)
    ceiling = pnorm(x0, 2) ** 2 * fam.weight.values(1).max() ** 2
    assert max(partial_sums(fam, x0, 2).sums) <= ceiling * (1 + 1e-12)
    assert plan.r_schedule == tuple(solve_r(p, 2) for p in plan.p_schedule)


def test_T2_contradiction_invariant():
    fam = OperatorFamily("diagonal", WeightSpec("log"), k_max=100_000)
    _, plan, rep = build_divergence_witness_T2(fam, 2, 2, targets=(1, 2, 3, 4))
    # no block from any N onwards has sum < 1
    assert all(s >= 1.0 for s in rep.block_sums)


def test_T2_single_block_with_p_one():
    fam = OperatorFamily("diagonal", WeightSpec("log"), k_max=100_000)
    x0, plan, rep = build_divergence_witness_T2(fam, 2, 2, targets=(10.0,), schedule=[1])
    assert plan.r_schedule == (Exponent(2),)
    lo, hi = plan.block(1)
    assert np.sum(fam.images(x0, hi)[lo:hi]) == pytest.approx(10.0, rel=1e-12)


def test_T2_refuses_l_rho_family():
    fam = OperatorFamily("diagonal", WeightSpec("power", {"alpha": 1.0}))
    with pytest.raises(PreconditionError):
        build_divergence_witness_T2(fam, 2, 2)


def test_T2_truncated_plan_is_flagged():
    fam = OperatorFamily("diagonal", WeightSpec("constant"), k_max=100)
    _, plan, _ = build_divergence_witness_T2(fam, 2, 2, targets=(1, 2, 3),
                                             checkpoints=[10, 100])
    assert not plan.complete


def test_block_plan_validation():
    with pytest.raises(ValueError):
        BlockPlan((0, 5, 5), (1, 1), (2, 2), (1, 1), (0, 0), (0, 0))


# -- density -------------------------------------------------------------------

def test_density_examples():
    fam = OperatorFamily("diagonal", WeightSpec("constant"), k_max=10_000)
    x0 = np.full(10_000, 1e-2)
    rep = perturbation_density_check(fam, 1, x0, [np.zeros(10_000)], [-2.0, 0.5, 3.0])
    for row in rep.rows:
        for s, w in zip(row["sums"], rep.witness_sums):
            assert s == pytest.approx(abs(row["lambda"]) * w, rel=1e-12)
    assert rep.consistent and rep.stagnant_counts == (0,)

    lam = 0.7
    cancel = perturbation_density_check(fam, 1, x0, [-lam * x0], [lam, 1.0, -1.0])
    assert cancel.stagnant_counts == (1,)
    assert cancel.rows[0]["stagnant"] and cancel.rows[0]["sums"][-1] == 0.0

    rng = np.random.default_rng(0)
    probes = [rng.standard_normal(10_000) / np.arange(1, 10_001) for _ in range(3)]
    grow = perturbation_density_check(fam, 1, x0, probes, [-1.0, -0.1, 0.1, 1.0])
    assert grow.stagnant_counts == (0, 0, 0)
    assert all(row["floor_holds"] for row in grow.rows)


def test_rademacher_signs_match_sine():
    K = 6
    mid = (np.arange(1 << K) + 0.5) / (1 << K)
    for k in range(1, K + 1):
        assert np.array_equal(rademacher_signs(k, K), np.sign(np.sin(2 ** k * np.pi * mid)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.lists(st.floats(-3, 3).filter(lambda v: abs(v) > 1e-3),
                                       min_size=1, max_size=6, unique=True))
def test_at_most_one_stagnant_lambda(seed, lambdas):
    fam = OperatorFamily("diagonal", WeightSpec("constant"), k_max=1000)
    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal(1000)
    # the adversarial probe cancels x0 exactly at the first sampled lambda
    probes = [rng.standard_normal(1000), -lambdas[0] * x0]
    rep = perturbation_density_check(fam, 1, x0, probes, lambdas, [10, 100, 1000])
    assert rep.consistent
    assert all(row["floor_holds"] for row in rep.rows)
