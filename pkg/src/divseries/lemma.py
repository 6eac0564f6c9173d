"""Constructive check of ||B|| >= C ||(||A_1||, ..., ||A_n||)||_r.

B(x_1, ..., x_n) = sum A_k x_k acts on l_q(X_1, ..., X_n) with q >= rho and
1/q + 1/r = 1/rho. The witness follows the classical argument: near-norming
unit vectors x_k, nonnegative weights a_k, and the sign pattern that the
M-cotype inequality provides in the codomain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    INF,
    DirectSumElement,
    Exponent,
    PreconditionError,
    as_exponent,
    pnorm,
    solve_r_from_q,
)
from .cotype import SignPattern, sign_max
from .operators import BlockOperator, MatrixOperator, NormEstimate, SearchBudget, operator_norm

__all__ = [
    "LemmaInstance",
    "LemmaWitnessReport",
    "lemma_weights",
    "construct_lemma_witness",
    "verify_lemma_bound",
]

_FP_SLACK = 1e-12


@dataclass(frozen=True)
class LemmaInstance:
    """Summands A_k : X_k -> Y sharing Y, the cotype data (rho, C) of Y and q."""

    summands: tuple
    rho: Exponent
    C: float
    q: Exponent

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        rho, q = as_exponent(self.rho), as_exponent(self.q)
        if rho.is_inf:
            raise PreconditionError("rho must be finite")
        if q < rho:
            raise PreconditionError(f"q = {q} must satisfy q >= rho = {rho}")
        if not self.C > 0:
            raise PreconditionError("the cotype constant C must be positive")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "q", q)

    @property
    def r(self) -> Exponent:
        return solve_r_from_q(self.q, self.rho)

    def block_operator(self) -> BlockOperator:
        return BlockOperator(self.summands, self.q)

    def codomain_is_hilbert(self) -> bool:
        A = self.summands[0]
        return A.shape[0] == 1 or A.codomain_exponent == 2


@dataclass(frozen=True)
class LemmaWitnessReport:
    witness: DirectSumElement
    achieved_ratio: float
    bound: float
    weights: np.ndarray
    signs: SignPattern
    r: Exponent
    delta: float
    norms: tuple
    chain_value: float
    conditional_on_C: bool
    zero: bool = False
    norm_methods: tuple = field(default=())

    def reevaluate_ratio(self, inst: LemmaInstance) -> float:
        return inst.block_operator().ratio(self.witness)


def lemma_weights(norms, q: Exponent, rho: Exponent) -> np.ndarray:
    """Weights a_k for the three regimes of q.

    q in (rho, inf): a_k = ||A_k||^(r/q), evaluated in log space and scaled so
    the largest weight is 1 (the ratio being bounded is scale invariant).
    q = rho: indicator of the first index of maximal norm.
    q = inf: all ones.
    """
    norms = np.asarray(norms, dtype=float)
    q, rho = as_exponent(q), as_exponent(rho)
    if q.is_inf:
        return np.ones_like(norms)
    if q == rho:
        w = np.zeros_like(norms)
        w[int(np.argmax(norms))] = 1.0
        return w
    r = solve_r_from_q(q, rho)
    power = float(r) / float(q)
    w = np.zeros_like(norms)
    pos = norms > 0
    if np.any(pos):
        logs = np.log(norms[pos])
        w[pos] = np.exp(power * (logs - logs.max()))
    return w


def construct_lemma_witness(inst: LemmaInstance, budget: SearchBudget | None = None,
                            seed: int = 0) -> LemmaWitnessReport:
    summands = inst.summands
    if not summands:
        raise PreconditionError("at least one A_k != 0 is required (empty family)")
    r = inst.r
    ests: list[NormEstimate] = [operator_norm(A, budget, seed + k) for k, A in enumerate(summands)]
    norms = np.array([e.certified_lower for e in ests])
    dom_exps = [A.domain_exponent for A in summands]
    if not np.any(norms):
        zero = DirectSumElement.from_arrays(
            [np.zeros(A.shape[1]) for A in summands], dom_exps, inst.q)
        return LemmaWitnessReport(zero, 0.0, 0.0, np.zeros(len(summands)),
                                  SignPattern([1] * len(summands)), r, 0.0, tuple(norms), 0.0,
                                  not inst.codomain_is_hilbert(), zero=True,
                                  norm_methods=tuple(e.method for e in ests))

    # unit near-maximisers x_k; the measured slack plays the role of delta
    xs, delta = [], 0.0
    for A, e in zip(summands, ests):
        x = e.witness.coords
        nx = e.witness.norm()
        if nx == 0.0:
            xs.append(x)
            continue
        x = x / nx
        xs.append(x)
        achieved = A.ratio(x)
        if achieved > 0:
            delta = max(delta, e.estimate / achieved - 1.0)
    delta = max(delta, 0.0)

    a = lemma_weights(norms, inst.q, inst.rho)
    images = np.vstack([a_k * (A.matrix @ x) for a_k, A, x in zip(a, summands, xs)])
    cod = summands[0].codomain_exponent
    _, eps = sign_max(images, cod)
    eps_arr = np.asarray(eps)
    blocks = [e * a_k * x for e, a_k, x in zip(eps_arr, a, xs)]
    witness = DirectSumElement.from_arrays(blocks, dom_exps, inst.q)

    B = inst.block_operator()
    achieved_ratio = B.ratio(witness)
    bound = inst.C * pnorm(norms, r)
    chain = inst.C / (1 + delta) * pnorm(a * norms, inst.rho) / pnorm(a, inst.q)
    return LemmaWitnessReport(
        witness=witness,
        achieved_ratio=achieved_ratio,
        bound=bound,
        weights=a,
        signs=eps,
        r=r,
        delta=delta,
        norms=tuple(norms),
        chain_value=chain,
        conditional_on_C=not (inst.codomain_is_hilbert() and inst.rho >= 2 and inst.C <= 1),
        norm_methods=tuple(e.method for e in ests),
    )


def verify_lemma_bound(inst: LemmaInstance, budget: SearchBudget | None = None,
                       seed: int = 0) -> tuple[bool, LemmaWitnessReport]:
    """True iff the witness ratio reaches bound / (1 + delta).

    A relative 1e-12 allowance absorbs rounding on exact paths (delta = 0).
    """
    rep = construct_lemma_witness(inst, budget, seed)
    if rep.zero:
        return True, rep
    ok = rep.achieved_ratio * (1 + rep.delta) * (1 + _FP_SLACK) >= rep.bound
    return bool(ok), rep
