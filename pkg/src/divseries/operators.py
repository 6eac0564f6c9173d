"""Dense operators between mixed l-spaces and their norms.

Every norm computation returns a :class:`NormEstimate` whose
``certified_lower`` is achieved by the attached witness. Upper bounds are
claimed (``exact=True``) only when a closed formula or a complete vertex
enumeration was used.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from .core import (
    INF,
    DirectSumElement,
    Exponent,
    PNormedVector,
    align,
    align_rows,
    as_exponent,
    conjugate,
    pnorm,
    row_pnorms,
    sign_chunks,
)

__all__ = [
    "SearchBudget",
    "BUDGETS",
    "MatrixOperator",
    "NormEstimate",
    "BlockOperator",
    "StackedOperator",
    "NormStructure",
    "operator_norm",
    "block_norm",
    "stacked_norm",
    "power_ascent",
]


@dataclass(frozen=True)
class SearchBudget:
    """Multi-start search limits. Results are deterministic given the seed."""

    starts: int = 16
    iterations: int = 500
    step_tol: float = 1e-10
    vertex_limit: int = 20
    workers: int = 1


BUDGETS = {
    "quick": SearchBudget(starts=4, iterations=100),
    "default": SearchBudget(),
    "thorough": SearchBudget(starts=64, iterations=2000),
}


def default_budget() -> SearchBudget:
    workers = int(os.environ.get("DIVSERIES_WORKERS", "1") or 1)
    return replace(SearchBudget(), workers=max(1, workers))


@dataclass(frozen=True)
class MatrixOperator:
    """A dense real m x n matrix acting l_s^n -> l_t^m."""

    matrix: np.ndarray
    domain_exponent: Exponent
    codomain_exponent: Exponent

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "domain_exponent", as_exponent(self.domain_exponent))
        object.__setattr__(self, "codomain_exponent", as_exponent(self.codomain_exponent))

    @property
    def shape(self) -> tuple:
        return self.matrix.shape

    def apply(self, x) -> PNormedVector:
        coords = x.coords if isinstance(x, PNormedVector) else np.asarray(x, dtype=float)
        if coords.ndim != 1 or coords.size != self.matrix.shape[1]:
            raise ValueError(
                f"dimension mismatch: operator takes {self.matrix.shape[1]}, got {coords.shape}"
            )
        return PNormedVector(self.matrix @ coords, self.codomain_exponent)

    def adjoint(self) -> "MatrixOperator":
        return MatrixOperator(
            self.matrix.T.copy(),
            conjugate(self.codomain_exponent),
            conjugate(self.domain_exponent),
        )

    def scaled(self, factor: float) -> "MatrixOperator":
        return MatrixOperator(factor * self.matrix, self.domain_exponent, self.codomain_exponent)

    def ratio(self, x) -> float:
        """||Ax||_t / ||x||_s, with 0 for a zero witness."""
        coords = x.coords if isinstance(x, PNormedVector) else np.asarray(x, dtype=float)
        nx = pnorm(coords, self.domain_exponent)
        if nx == 0.0:
            return 0.0
        return pnorm(self.matrix @ coords, self.codomain_exponent) / nx

    def __eq__(self, other):
        if not isinstance(other, MatrixOperator):
            return NotImplemented
        return (
            self.domain_exponent == other.domain_exponent
            and self.codomain_exponent == other.codomain_exponent
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None


@dataclass(frozen=True)
class NormEstimate:
    certified_lower: float
    estimate: float
    exact: bool
    witness: object
    method: str
    evaluations: int = 0

    def __post_init__(self):
        if self.certified_lower > self.estimate:
            object.__setattr__(self, "estimate", self.certified_lower)


@dataclass(frozen=True)
class NormStructure:
    """Norm on R^N arranged as l_outer(l_{e_1}^{d_1}, ..., l_{e_n}^{d_n}).

    A plain l_s^d is the single-block case.
    """

    dims: tuple
    inner: tuple
    outer: Exponent

    @classmethod
    def flat(cls, dim: int, s) -> "NormStructure":
        s = as_exponent(s)
        return cls((dim,), (s,), s)

    @property
    def size(self) -> int:
        return int(sum(self.dims))

    def _split(self, v):
        return np.split(np.asarray(v, dtype=float), np.cumsum(self.dims)[:-1])

    @cached_property
    def _uniform(self) -> bool:
        return len(set(self.dims)) == 1 and (
            self.dims[0] <= 1 or all(e == self.inner[0] for e in self.inner)
        )

    @cached_property
    def _segments(self):
        """(block starts, block index of every coordinate), or None when a
        block is empty and the per-block loop has to be used."""
        if len(self.dims) < 2 or min(self.dims) == 0:
            return None
        starts = np.concatenate([[0], np.cumsum(self.dims)[:-1]])
        return starts, np.repeat(np.arange(len(self.dims)), self.dims)

    def _exponents(self, dual: bool) -> np.ndarray:
        return np.array([float(conjugate(e)) if dual else float(e) for e in self.inner])

    def _segment_norms(self, a: np.ndarray, f: np.ndarray) -> np.ndarray:
        """Blockwise f_k-norms of the nonnegative vector a, max factored."""
        starts, owner = self._segments
        m = np.maximum.reduceat(a, starts)
        safe = np.where(m > 0, m, 1.0)
        fin = np.where(np.isinf(f), 1.0, f)
        sums = np.add.reduceat((a / safe[owner]) ** fin[owner], starts)
        out = np.where(np.isinf(f), m, m * sums ** (1.0 / fin))
        return np.where(m > 0, out, 0.0)

    def block_norms(self, v, dual: bool = False) -> np.ndarray:
        inner = [conjugate(e) for e in self.inner] if dual else self.inner
        v = np.asarray(v, dtype=float)
        if len(self.dims) > 1 and self._uniform:
            return row_pnorms(v.reshape(len(self.dims), self.dims[0]), inner[0])
        if self._segments is not None:
            return self._segment_norms(np.abs(v), self._exponents(dual))
        return np.array([pnorm(p, e) for p, e in zip(self._split(v), inner)])

    def norm(self, v) -> float:
        return pnorm(self.block_norms(v), self.outer)

    def dual(self) -> "NormStructure":
        return NormStructure(
            self.dims, tuple(conjugate(e) for e in self.inner), conjugate(self.outer)
        )

    def align(self, z) -> np.ndarray:
        """Unit x in this structure with <z, x> equal to the dual norm of z."""
        z = np.asarray(z, dtype=float)
        beta = self.block_norms(z, dual=True)
        amp = np.abs(align(beta, self.outer))
        if len(self.dims) > 1 and self._uniform:
            Z = z.reshape(len(self.dims), self.dims[0])
            return (amp[:, None] * align_rows(Z, self.inner[0])).ravel()
        if self._segments is not None:
            return self._segment_align(z, amp)
        out = [a * align(p, e) for a, p, e in zip(amp, self._split(z), self.inner)]
        return np.concatenate(out) if out else np.zeros(0)

    def _segment_align(self, z: np.ndarray, amp: np.ndarray) -> np.ndarray:
        """Blockwise :func:`align` scaled by amp, same tie rules."""
        starts, owner = self._segments
        f = self._exponents(False)
        t = self._exponents(True)
        a = np.abs(z)
        sgn = np.where(z < 0, -1.0, 1.0)
        m = np.maximum.reduceat(a, starts)
        zero = m == 0
        # s = 1: a single signed coordinate at the first largest modulus
        idx = np.arange(a.size)
        first = np.minimum.reduceat(np.where(a == m[owner], idx, a.size), starts)
        at_first = idx == first[owner]
        tn = self._segment_norms(a, t)
        safe = np.where(tn > 0, tn, 1.0)
        tf = np.where(np.isinf(t), 2.0, t)
        x = sgn * (a / safe[owner]) ** (tf[owner] - 1.0)
        fe = f[owner]
        x = np.where(fe == 1.0, np.where(at_first, sgn, 0.0), x)
        x = np.where(np.isinf(fe), sgn, x)
        # zero blocks: ones for s = inf, the first basis vector otherwise
        zb = zero[owner]
        x = np.where(zb, np.where(np.isinf(fe), 1.0, (idx == starts[owner]).astype(float)), x)
        x = x / self._segment_norms(np.abs(x), f)[owner]
        return amp[owner] * x

    def is_flat_equivalent(self) -> bool:
        """True when the mixed norm coincides with a plain l_outer norm."""
        return all(d <= 1 or e == self.outer for d, e in zip(self.dims, self.inner))


def _ratio(M: np.ndarray, dom: NormStructure, cod: NormStructure, x) -> float:
    nx = dom.norm(x)
    if nx == 0.0:
        return 0.0
    return cod.norm(M @ x) / nx


def _ascend(M, dom: NormStructure, cod: NormStructure, x0, budget: SearchBudget):
    """Nonlinear power iteration for max ||Mx|| on the unit sphere of dom.

    Each step aligns with the codomain dual of Mx, pulls back by M^T and
    retracts onto the sphere through the Hölder-equality map. The value is
    nondecreasing along the iteration.
    """
    cod_dual = cod.dual()
    x = dom.align(x0) if dom.norm(x0) == 0 else x0 / dom.norm(x0)
    val = _ratio(M, dom, cod, x)
    evals = 1
    for _ in range(budget.iterations):
        y = M @ x
        if not np.any(y):
            break
        x_new = dom.align(M.T @ cod_dual.align(y))
        new_val = _ratio(M, dom, cod, x_new)
        evals += 1
        if new_val < val:
            break
        step = float(np.max(np.abs(x_new - x)))
        x, val = x_new, new_val
        if step <= budget.step_tol:
            break
    return x, val, evals


def power_ascent(M, dom: NormStructure, cod: NormStructure, budget: SearchBudget, seed: int):
    """Multi-start ascent; returns (witness, value, evaluations).

    Start 0 uses the largest column (in the codomain norm); the rest are
    seeded Gaussian draws. Reduction is max with lowest-index tie-break.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[1]
    rng = np.random.default_rng(seed)
    starts = []
    if n:
        col = int(np.argmax([cod.norm(M[:, j]) for j in range(n)]))
        e = np.zeros(n)
        e[col] = 1.0
        starts.append(e)
    starts.extend(rng.standard_normal(n) for _ in range(max(0, budget.starts - 1)))

    def run(x0):
        return _ascend(M, dom, cod, x0, budget)

    if budget.workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(budget.workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(x0) for x0 in starts]
    best = max(range(len(results)), key=lambda i: (results[i][1], -i))
    evals = sum(r[2] for r in results)
    return results[best][0], results[best][1], evals


def _vertex_max(M, cod_exp: Exponent):
    """max over canonical sign vectors of ||M eps||_cod (global flip is free)."""
    n = M.shape[1]
    best_val, best_eps = -1.0, None
    for S in sign_chunks(n):
        Y = np.abs(M @ S)
        if cod_exp.is_inf:
            vals = Y.max(axis=0)
        elif cod_exp == 1:
            vals = Y.sum(axis=0)
        elif cod_exp == 2:
            vals = np.sqrt(np.einsum("ij,ij->j", Y, Y))
        else:
            vals = np.array([pnorm(Y[:, j], cod_exp) for j in range(Y.shape[1])])
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best_eps = float(vals[j]), S[:, j].copy()
    return best_eps, best_val


def operator_norm(A: MatrixOperator, budget: SearchBudget | None = None, seed: int = 0,
                  method: str = "auto") -> NormEstimate:
    """Norm of A : l_s^n -> l_t^m.

    Exact paths: s = 1 (largest column), t = inf or m = 1 (largest row in the
    conjugate norm), s = t = 2 (largest singular value), s = inf with
    n <= vertex_limit (sign vertices), t = 1 with m <= vertex_limit (sign
    vertices of the adjoint). Anything else, or ``method="search"``, runs
    multi-start projected ascent.
    """
    budget = budget or default_budget()
    M = A.matrix
    m, n = M.shape
    s, t = A.domain_exponent, A.codomain_exponent
    if not np.any(M):
        return NormEstimate(0.0, 0.0, True, PNormedVector(np.zeros(n), s), "zero")

    def done(x, method_name, exact, evals=0, estimate=None):
        w = PNormedVector(x, s)
        lower = A.ratio(w)
        est = lower if estimate is None else max(lower, estimate)
        return NormEstimate(lower, est, exact, w, method_name, evals)

    if method == "auto":
        if s == 1:
            norms = [pnorm(M[:, j], t) for j in range(n)]
            j = int(np.argmax(norms))
            x = np.zeros(n)
            x[j] = 1.0
            return done(x, "exact:column", True, estimate=norms[j])
        if t.is_inf or m == 1:
            tc = conjugate(s)
            norms = [pnorm(M[i], tc) for i in range(m)]
            i = int(np.argmax(norms))
            return done(align(M[i], s), "exact:row", True, estimate=norms[i])
        if s == 2 and t == 2:
            _, sv, vt = np.linalg.svd(M)
            return done(vt[0], "exact:spectral", True, estimate=float(sv[0]))
        if s.is_inf and n <= budget.vertex_limit:
            eps, val = _vertex_max(M, t)
            return done(eps, "exact:vertex", True, evals=1 << max(n - 1, 0), estimate=val)
        if t == 1 and m <= budget.vertex_limit:
            eps, val = _vertex_max(M.T, conjugate(s))
            return done(align(M.T @ eps, s), "exact:adjoint-vertex", True,
                        evals=1 << max(m - 1, 0), estimate=val)
    x, _, evals = power_ascent(M, NormStructure.flat(n, s), NormStructure.flat(m, t), budget, seed)
    return done(x, "search", False, evals)


@dataclass(frozen=True)
class BlockOperator:
    """B(x_1, ..., x_n) = sum_k A_k x_k on l_q(X_1, ..., X_n)."""

    summands: tuple
    outer_domain_exponent: Exponent

    def __post_init__(self):
        summands = tuple(self.summands)
        if not summands:
            raise ValueError("a block operator needs at least one summand")
        rows = {A.shape[0] for A in summands}
        if len(rows) != 1:
            raise ValueError("summands must share the codomain")
        cods = [A.codomain_exponent for A in summands]
        if rows.pop() > 1 and any(c != cods[0] for c in cods):
            raise ValueError("summands must share the codomain exponent")
        object.__setattr__(self, "summands", summands)
        object.__setattr__(self, "outer_domain_exponent", as_exponent(self.outer_domain_exponent))

    @property
    def codomain_exponent(self) -> Exponent:
        return self.summands[0].codomain_exponent

    @property
    def matrix(self) -> np.ndarray:
        return np.hstack([A.matrix for A in self.summands])

    def domain_structure(self) -> NormStructure:
        return NormStructure(
            tuple(A.shape[1] for A in self.summands),
            tuple(A.domain_exponent for A in self.summands),
            self.outer_domain_exponent,
        )

    def codomain_structure(self) -> NormStructure:
        return NormStructure.flat(self.summands[0].shape[0], self.codomain_exponent)

    def apply(self, x) -> PNormedVector:
        if isinstance(x, DirectSumElement):
            if x.dims != tuple(A.shape[1] for A in self.summands):
                raise ValueError("block dimensions do not match the summands")
            y = sum(A.matrix @ b.coords for A, b in zip(self.summands, x.blocks))
        else:
            parts = list(x)
            if len(parts) != len(self.summands):
                raise ValueError("wrong number of blocks")
            y = sum(A.apply(p).coords for A, p in zip(self.summands, parts))
        return PNormedVector(y, self.codomain_exponent)

    def split(self, flat) -> DirectSumElement:
        dom = self.domain_structure()
        return DirectSumElement.from_arrays(dom._split(flat), dom.inner, dom.outer)

    def ratio(self, x: DirectSumElement) -> float:
        nx = x.norm()
        return 0.0 if nx == 0.0 else self.apply(x).norm() / nx

    def adjoint(self) -> "StackedOperator":
        return StackedOperator(
            tuple(A.adjoint() for A in self.summands), conjugate(self.outer_domain_exponent)
        )


@dataclass(frozen=True)
class StackedOperator:
    """B_n x = (A_1 x, ..., A_n x) into l_p(Y_1, ..., Y_n)."""

    stages: tuple
    outer_codomain_exponent: Exponent

    def __post_init__(self):
        stages = tuple(self.stages)
        if not stages:
            raise ValueError("a stacked operator needs at least one stage")
        if len({A.shape[1] for A in stages}) != 1:
            raise ValueError("stages must share the domain")
        doms = [A.domain_exponent for A in stages]
        if stages[0].shape[1] > 1 and any(d != doms[0] for d in doms):
            raise ValueError("stages must share the domain exponent")
        object.__setattr__(self, "stages", stages)
        object.__setattr__(self, "outer_codomain_exponent", as_exponent(self.outer_codomain_exponent))

    @property
    def domain_exponent(self) -> Exponent:
        return self.stages[0].domain_exponent

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack([A.matrix for A in self.stages])

    def domain_structure(self) -> NormStructure:
        return NormStructure.flat(self.stages[0].shape[1], self.domain_exponent)

    def codomain_structure(self) -> NormStructure:
        return NormStructure(
            tuple(A.shape[0] for A in self.stages),
            tuple(A.codomain_exponent for A in self.stages),
            self.outer_codomain_exponent,
        )

    def apply(self, x) -> DirectSumElement:
        return DirectSumElement(
            tuple(A.apply(x) for A in self.stages), self.outer_codomain_exponent
        )

    def ratio(self, x) -> float:
        coords = x.coords if isinstance(x, PNormedVector) else np.asarray(x, dtype=float)
        nx = pnorm(coords, self.domain_exponent)
        return 0.0 if nx == 0.0 else self.apply(coords).norm() / nx

    def adjoint(self) -> BlockOperator:
        return BlockOperator(
            tuple(A.adjoint() for A in self.stages), conjugate(self.outer_codomain_exponent)
        )


def block_norm(B: BlockOperator, budget: SearchBudget | None = None, seed: int = 0) -> NormEstimate:
    """Norm of B on l_q(X_1, ..., X_n).

    Exact when there is one block, when q = 1 (extreme points live in single
    blocks), when the codomain is l_inf, or when the mixed domain norm equals
    a flat l_q norm and the flat operator has an exact path. Otherwise the
    alternating ascent: align a codomain direction, pull back blockwise,
    weight blocks by the Hölder-equality amplitudes for the outer q-ball.
    """
    budget = budget or default_budget()
    dom, cod = B.domain_structure(), B.codomain_structure()
    M = B.matrix
    q = B.outer_domain_exponent

    def done(flat, method_name, exact, evals=0, estimate=None):
        w = B.split(flat)
        lower = B.ratio(w)
        est = lower if estimate is None else max(lower, estimate)
        return NormEstimate(lower, est, exact, w, method_name, evals)

    if not np.any(M):
        return done(np.zeros(dom.size), "zero", True, estimate=0.0)
    offsets = np.concatenate([[0], np.cumsum(dom.dims)])

    def embed(k, xk):
        flat = np.zeros(dom.size)
        flat[offsets[k]:offsets[k + 1]] = xk
        return flat

    if len(B.summands) == 1:
        est = operator_norm(B.summands[0], budget, seed)
        return done(est.witness.coords, est.method, est.exact, est.evaluations, est.estimate)
    if q == 1:
        ests = [operator_norm(A, budget, seed + k) for k, A in enumerate(B.summands)]
        k = int(np.argmax([e.estimate for e in ests]))
        exact = all(e.exact for e in ests)
        return done(embed(k, ests[k].witness.coords), "exact:block-max" if exact else "search",
                    exact, sum(e.evaluations for e in ests), ests[k].estimate if exact else None)
    if cod.outer.is_inf or cod.size == 1:
        qc = conjugate(q)
        best_i, best_val = 0, -1.0
        for i in range(M.shape[0]):
            beta = [pnorm(M[i, offsets[k]:offsets[k + 1]], conjugate(e))
                    for k, e in enumerate(dom.inner)]
            v = pnorm(beta, qc)
            if v > best_val:
                best_i, best_val = i, v
        return done(dom.align(M[best_i]), "exact:row", True, estimate=best_val)
    if dom.is_flat_equivalent():
        flat_op = MatrixOperator(M, q, B.codomain_exponent)
        est = operator_norm(flat_op, budget, seed)
        if est.exact:
            return done(est.witness.coords, est.method, True, est.evaluations, est.estimate)
    x, _, evals = power_ascent(M, dom, cod, budget, seed)
    return done(x, "search", False, evals)


def stacked_norm(Bn: StackedOperator, budget: SearchBudget | None = None, seed: int = 0) -> NormEstimate:
    """Norm of B_n : X -> l_p(Y_1, ..., Y_n).

    Route 1 computes the block norm of the adjoint family on l_q(Y_k*) with
    q the conjugate of p and transfers its dual witness y* to the domain via
    x = align(B_n^* y*); then ||B_n x|| >= <B_n^* y*, x>/||y*|| = ||B_n^* y*||.
    Route 2 ascends directly on the domain sphere. The certified lower bound
    is the better of the two witnesses.
    """
    budget = budget or default_budget()
    dom, cod = Bn.domain_structure(), Bn.codomain_structure()
    M = Bn.matrix
    n = dom.size
    if not np.any(M):
        w = PNormedVector(np.zeros(n), Bn.domain_exponent)
        return NormEstimate(0.0, 0.0, True, w, "zero")
    if len(Bn.stages) == 1:
        return operator_norm(Bn.stages[0], budget, seed)

    adj = block_norm(Bn.adjoint(), budget, seed)
    ystar = adj.witness.flat()
    x1 = dom.align(M.T @ ystar)
    r1 = Bn.ratio(x1)
    x2, _, evals = power_ascent(M, dom, cod, budget, seed + 1)
    r2 = Bn.ratio(x2)
    x, lower, route = (x1, r1, "adjoint") if r1 >= r2 else (x2, r2, "direct")
    method = f"{'exact' if adj.exact else 'search'}:stacked-{route}"
    estimate = adj.estimate if adj.exact else lower
    return NormEstimate(lower, max(lower, estimate), adj.exact,
                        PNormedVector(x, Bn.domain_exponent), method,
                        adj.evaluations + evals)
