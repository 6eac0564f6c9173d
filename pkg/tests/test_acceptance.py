"""Acceptance suite: one test per criterion, each at its stated tolerance
and runtime limit. A pass/fail line per criterion is printed in the
terminal summary (see conftest.py)."""

import time
from fractions import Fraction

import numpy as np
import pytest

from divseries.core import INF, Exponent, PreconditionError, conjugate, pnorm, solve_r, solve_r_from_q
from divseries.cotype import cotype_ratio, sign_max, unit_modulus_max_sampled
from divseries.divergence import (
    OperatorFamily,
    WeightSpec,
    build_divergence_witness_T1,
    build_divergence_witness_T2,
    partial_sums,
)
from divseries.lemma import LemmaInstance, verify_lemma_bound
from divseries.operators import MatrixOperator, block_norm, operator_norm
from divseries.report import render
from divseries.sharpness import example2_check, example3_check

SEED = 20240607


def criterion_1(seed):
    """Hilbert sign-max identity and orthonormal ratio."""
    rng = np.random.default_rng(seed)
    slacks = []
    for _ in range(200):
        n, d = int(rng.integers(1, 11)), int(rng.integers(1, 7))
        V = rng.standard_normal((n, d)) * rng.uniform(0.1, 10)
        slacks.append(sign_max(V, 2)[0] ** 2 - float(np.sum(V ** 2)))
    errors = []
    for _ in range(50):
        d = int(rng.integers(1, 7))
        n = int(rng.integers(1, d + 1))
        Q = np.linalg.qr(rng.standard_normal((d, d)))[0][:, :n].T
        errors.append(abs(cotype_ratio(Q, 2, 2) - 1.0))
    ok = min(slacks) >= -1e-9 and max(errors) <= 1e-12
    return ok, {"min_slack": min(slacks), "max_orthonormal_error": max(errors)}


def criterion_2(seed):
    """Complex unit-modulus max within twice the sign max."""
    rng = np.random.default_rng(seed)
    gaps = []
    for i in range(100):
        n, d = int(rng.integers(1, 7)), int(rng.integers(1, 5))
        V = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        unit = unit_modulus_max_sampled(V, 2, samples=4096, seed=seed + i)
        gaps.append(2 * sign_max(V, 2)[0] + 1e-9 - unit)
    return min(gaps) >= 0, {"min_gap": min(gaps)}


def criterion_3(seed):
    """Lemma on Hilbert codomain instances, cross-checked by block_norm."""
    rng = np.random.default_rng(seed)
    qs = [Exponent(2), Exponent(3), Exponent(4), INF]
    s_choices = [Exponent(1), Exponent(2), Exponent(3), INF]
    failures, margins, slack = 0, [], []
    for i in range(100):
        n, m = int(rng.integers(1, 9)), int(rng.integers(1, 7))
        summands = tuple(
            MatrixOperator(rng.standard_normal((m, int(rng.integers(1, 7)))) * rng.uniform(0.1, 3),
                           s_choices[int(rng.integers(4))], 2)
            for _ in range(n))
        inst = LemmaInstance(summands, 2, 1.0, qs[i % 4])
        ok, rep = verify_lemma_bound(inst, seed=seed + i)
        est = block_norm(inst.block_operator(), seed=seed + i)
        failures += (not ok) + (est.certified_lower < rep.bound - 1e-6)
        margins.append(est.certified_lower - rep.bound)
        slack.append(rep.achieved_ratio * (1 + rep.delta) / rep.bound)
    return failures == 0, {"failures": failures, "min_block_norm_margin": min(margins),
                           "min_witness_ratio_over_bound": min(slack)}


def criterion_4(seed):
    """||A|| = ||A*|| on exact-formula pairs."""
    rng = np.random.default_rng(seed)
    pairs = [(1, 2), (1, 3), (1, INF), (2, INF), (3, INF), (2, 2), (INF, 2), (INF, 3),
             (INF, INF), (2, 1), (3, 1), (1, 1)]
    diffs, inexact = [], 0
    for i in range(100):
        s, t = pairs[i % len(pairs)]
        A = MatrixOperator(rng.standard_normal((int(rng.integers(1, 7)), int(rng.integers(1, 7)))), s, t)
        a, b = operator_norm(A), operator_norm(A.adjoint())
        inexact += (not a.exact) + (not b.exact)
        diffs.append(abs(a.estimate - b.estimate))
    return max(diffs) <= 1e-9 and inexact == 0, {"max_difference": max(diffs), "inexact": inexact}


def criterion_5(seed):
    """T1 witness on a_k = 1, l_2, p = 1."""
    fam = OperatorFamily("diagonal", WeightSpec("constant"), k_max=100_000)
    x0, rep = build_divergence_witness_T1(fam, 1, 2, target=100.0, seed=seed)
    norm = pnorm(x0, 2)
    ok = abs(norm - 1.0) <= 1e-12 and max(rep.sums) >= 100.0 and max(rep.checkpoints) <= 100_000
    return ok, {"witness_norm": norm, "checkpoints": rep.checkpoints, "sums": rep.sums,
                "block_end": rep.notes["block_end"]}


def criterion_6(seed):
    """Refusal of a_k = 2^-k and the example-2 Hölder ceiling."""
    fam = OperatorFamily("diagonal", WeightSpec("geometric", {"ratio": 0.5}), k_max=100_000)
    try:
        build_divergence_witness_T1(fam, 1, 2, seed=seed)
        refused = False
    except PreconditionError:
        refused = True
    rep = example2_check(2, 1, WeightSpec("geometric", {"ratio": 0.5}), n_samples=100, seed=seed)
    samples = len({row["sample"] for row in rep.rows})
    ok = refused and rep.within_ceiling and samples == 100
    return ok, {"refused": refused, "max_ratio": rep.max_ratio, "samples": samples,
                "checkpoints": rep.checkpoints}


def criterion_7(seed):
    """T2 witness on a_k = 1/log(k + 2), p0 = 2."""
    fam = OperatorFamily("diagonal", WeightSpec("log"), k_max=100_000)
    x0, plan, rep = build_divergence_witness_T2(fam, 2, 2, targets=(1, 2, 3), seed=seed)
    achieved = []
    for n in (1, 2, 3):
        lo, hi = plan.block(n)
        achieved.append(pnorm(fam.images(x0, hi)[lo:hi], plan.p_schedule[n - 1]))
    ceiling = pnorm(x0, 2) ** 2 * float(fam.norms(1).max()) ** 2
    sums = partial_sums(fam, x0, 2).sums
    ok = (len(plan.ends) == 4 and all(a >= n for n, a in enumerate(achieved, start=1))
          and all(s <= ceiling for s in sums))
    return ok, {"ends": plan.ends, "p_schedule": plan.p_schedule, "achieved": achieved,
                "sums_p2": sums, "ceiling": ceiling}


def criterion_8(seed):
    """Rademacher system on the depth-12 grid."""
    rep = example3_check(3, 1, WeightSpec("power", {"alpha": 1.0}), K=12, n_samples=100, seed=seed)
    gram = np.array(rep.extra["gram"])
    ok = (np.array_equal(gram, np.eye(12)) and rep.max_norm_error <= 1e-6
          and rep.extra["bessel_ok"] and rep.within_ceiling and rep.passed)
    return bool(ok), {"max_norm_error": rep.max_norm_error, "max_ratio": rep.max_ratio,
                      "bessel_ok": rep.extra["bessel_ok"], "gram_ok": rep.extra["gram_ok"]}


def criterion_9(seed):
    """Exponent identities under the infinity conventions."""
    ps = [Exponent(1), Exponent(Fraction(3, 2)), Exponent(2), Exponent(3), Exponent(Fraction(7, 3)), INF]
    checks = [conjugate(1).is_inf, conjugate(INF) == Exponent(1)]
    checks += [solve_r(p, 1) == p for p in ps]
    checks += [solve_r_from_q(rho, rho) == INF for rho in ps[:-1]]
    return all(checks), {"checks": len(checks), "passed": sum(bool(c) for c in checks)}


CRITERIA = {
    1: (criterion_1, 5.0),
    2: (criterion_2, 10.0),
    3: (criterion_3, 60.0),
    4: (criterion_4, 5.0),
    5: (criterion_5, 10.0),
    6: (criterion_6, 10.0),
    7: (criterion_7, 60.0),
    8: (criterion_8, 30.0),
    9: (criterion_9, 1.0),
}
BODIES = {}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, acceptance):
    fn, limit = CRITERIA[number]
    start = time.perf_counter()
    ok, body = fn(SEED)
    elapsed = time.perf_counter() - start
    BODIES[number] = render(body)
    passed = bool(ok) and elapsed < limit
    acceptance(number, passed, f"{fn.__doc__.strip()} {elapsed:.2f}s (limit {limit:.0f}s)")
    assert ok, body
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def test_criterion_10_determinism(acceptance):
    mismatched = []
    for number, (fn, _) in sorted(CRITERIA.items()):
        first = BODIES.get(number) or render(fn(SEED)[1])
        if render(fn(SEED)[1]) != first:
            mismatched.append(number)
    acceptance(10, not mismatched, "byte-identical report bodies on rerun"
               + (f" (mismatch in {mismatched})" if mismatched else ""))
    assert not mismatched
