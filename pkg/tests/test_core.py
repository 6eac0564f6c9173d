import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from divseries.core import (
    INF,
    DirectSumElement,
    Exponent,
    PNormedVector,
    PreconditionError,
    align,
    conjugate,
    direct_sum_norm,
    dual_pairing,
    pnorm,
    sign_chunks,
    solve_r,
    solve_r_from_q,
)

finite_vectors = arrays(np.float64, st.integers(1, 8),
                        elements=st.floats(-1e3, 1e3, allow_nan=False))
exponents = st.one_of(
    st.just(INF),
    st.fractions(min_value=1, max_value=12, max_denominator=20).map(Exponent),
    st.floats(1.0, 40.0).map(Exponent),
)


# -- exponent arithmetic ---------------------------------------------------

@pytest.mark.parametrize("e, expected", [(1, INF), (2, Exponent(2)), (4, Exponent(Fraction(4, 3)))])
def test_conjugate_examples(e, expected):
    assert conjugate(e) == expected


def test_conjugate_of_inf_is_one():
    assert conjugate(INF) == 1


def test_exponent_rejects_values_below_one():
    with pytest.raises(ValueError):
        Exponent(0.5)
    with pytest.raises(ValueError):
        Exponent(-math.inf)


def test_floats_with_small_denominators_become_exact():
    e = Exponent(4 / 3)
    assert e.is_exact and e == Fraction(4, 3)
    assert not Exponent(math.pi).is_exact


@given(exponents)
def test_conjugate_is_an_involution(e):
    assert conjugate(conjugate(e)) == e


@given(exponents)
def test_conjugate_relation(e):
    total = e.reciprocal() + conjugate(e).reciprocal()
    assert abs(float(total) - 1.0) <= 1e-12


@pytest.mark.parametrize("p, rho, expected", [(3, 1, 3), (1, 2, 2), (2, 2, INF)])
def test_solve_r_examples(p, rho, expected):
    assert solve_r(p, rho) == expected


def test_solve_r_rejects_p_beyond_dual_cotype_range():
    with pytest.raises(PreconditionError):
        solve_r(3, 2)
    with pytest.raises(PreconditionError):
        solve_r(2, INF)


@pytest.mark.parametrize("q, rho, expected", [(2, 2, INF), (3, 3, INF), (INF, 2, 2), (4, 2, 4)])
def test_solve_r_from_q_examples(q, rho, expected):
    assert solve_r_from_q(q, rho) == expected


def test_solve_r_from_q_rejects_small_q():
    with pytest.raises(PreconditionError):
        solve_r_from_q(1.5, 2)


@given(st.fractions(1, 10, max_denominator=12).filter(lambda r: r > 1),
       st.fractions(0, 1, max_denominator=12))
def test_exponent_chain_is_exact(rho, frac):
    # p ranges over [1, rho/(rho-1)] via 1/p = 1 - frac/rho
    inv_p = 1 - frac / rho
    p = Exponent(1 / inv_p)
    assert solve_r(p, rho) == solve_r_from_q(conjugate(p), rho)


# -- norms ------------------------------------------------------------------

@pytest.mark.parametrize("v, s, expected", [
    ((3, 4), 2, 5.0),
    ((1, -2, 3), INF, 3.0),
    ((1, 1, 1, 1), 4, math.sqrt(2)),
])
def test_pnorm_examples(v, s, expected):
    assert pnorm(v, s) == pytest.approx(expected, abs=1e-15)


def test_pnorm_large_exponent_does_not_overflow():
    v = np.array([1e200, 1e200])
    assert pnorm(v, 50) == pytest.approx(1e200 * 2 ** (1 / 50), rel=1e-12)


@given(finite_vectors, exponents, exponents)
def test_pnorm_is_monotone_in_exponent(v, s1, s2):
    lo, hi = sorted([s1, s2], key=float)
    assert pnorm(v, hi) <= pnorm(v, lo) * (1 + 1e-12) + 1e-300


@given(finite_vectors, exponents, st.floats(-1e3, 1e3))
def test_pnorm_is_absolutely_homogeneous(v, s, lam):
    assert pnorm(lam * v, s) == pytest.approx(abs(lam) * pnorm(v, s), rel=1e-9, abs=1e-300)


def test_pnorm_zero_iff_zero_vector():
    assert pnorm([0.0, 0.0], 3) == 0.0
    assert pnorm([0.0, 1e-300], 3) > 0.0


@given(finite_vectors, exponents)
def test_holder_inequality_and_equality_witness(v, s):
    rng = np.random.default_rng(abs(hash(float(s))) % 2**32)
    u = rng.standard_normal(v.size)
    t = conjugate(s)
    assert abs(np.dot(u, v)) <= pnorm(u, t) * pnorm(v, s) * (1 + 1e-12) + 1e-12
    w = align(u, s)
    assert pnorm(w, s) == pytest.approx(1.0, abs=1e-12)
    assert np.dot(u, w) == pytest.approx(pnorm(u, t), rel=1e-9)


def test_direct_sum_examples():
    zero_block = DirectSumElement.from_arrays([(3, 4), (0, 0)], [2, 2], 1)
    assert direct_sum_norm(zero_block) == 5.0
    ones = DirectSumElement.from_arrays([(1,), (1,)], [2, 2], INF)
    assert ones.norm() == 1.0
    mixed = DirectSumElement.from_arrays([(3, 4), (5,)], [2, 1], 2)
    # block norms (5, 5) combined in l_2
    assert mixed.norm() == pytest.approx(math.sqrt(50), abs=1e-14)


def test_direct_sum_norm_is_outer_norm_of_block_norms():
    x = DirectSumElement.from_arrays([(1, -2, 2), (0.5,), (3, 4)], [3, 1, INF], 4)
    assert x.norm() == pnorm([pnorm((1, -2, 2), 3), 0.5, 4.0], 4)


def test_dual_pairing_examples():
    x = DirectSumElement.from_arrays([(2, 3)], [1], 1)
    zero = DirectSumElement.from_arrays([(0, 0)], [INF], INF)
    assert dual_pairing(zero, x) == 0.0
    ones = DirectSumElement.from_arrays([(1, 1)], [INF], INF)
    assert dual_pairing(ones, x) == 5.0
    n = 7
    u = np.ones(n) / math.sqrt(n)
    e = DirectSumElement.from_arrays([u], [2], 2)
    assert dual_pairing(e, e) == pytest.approx(float(np.dot(u, u)), abs=1e-15)


def test_dual_pairing_rejects_mismatches():
    x = DirectSumElement.from_arrays([(1, 2)], [2], 2)
    with pytest.raises(ValueError):
        dual_pairing(DirectSumElement.from_arrays([(1, 2, 3)], [2], 2), x)
    with pytest.raises(ValueError):
        dual_pairing(DirectSumElement.from_arrays([(1, 2)], [2], 3), x)


@settings(max_examples=50)
@given(st.integers(1, 4), st.lists(st.tuples(st.integers(1, 3), exponents), min_size=1, max_size=4))
def test_direct_sum_holder(seed, blocks):
    rng = np.random.default_rng(seed)
    dims = [d for d, _ in blocks]
    inner = [e for _, e in blocks]
    s = Exponent(3)
    x = DirectSumElement.from_arrays([rng.standard_normal(d) for d in dims], inner, s)
    xs = DirectSumElement.from_arrays([rng.standard_normal(d) for d in dims],
                                      [conjugate(e) for e in inner], conjugate(s))
    assert abs(dual_pairing(xs, x)) <= xs.norm() * x.norm() * (1 + 1e-12)


def test_pnormed_vector_norm_and_scaling():
    v = PNormedVector([3, 4], 2)
    assert v.norm() == 5.0
    assert v.scaled(-2).norm() == 10.0


def test_sign_chunks_enumerate_canonical_patterns_in_order():
    pats = np.hstack(list(sign_chunks(3, chunk=2)))
    assert pats.shape == (3, 4)
    assert np.all(pats[0] == 1)
    assert [tuple(c) for c in pats.T] == [(1, -1, -1), (1, -1, 1), (1, 1, -1), (1, 1, 1)]
