"""Finite versions of the three sharpness examples.

In each one the weights (a_k) lie in l_r, ||A_k|| = a_k, and every orbit
(||A_k x||) stays in l_p. At desk scale this means the partial sums never
leave a Hölder ceiling. Continuous [0, 1] is replaced by the dyadic grid of
depth K; Rademacher functions r_k with k <= K are constant on its cells, so
inner products and norms on the grid are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Exponent, PreconditionError, as_exponent, conjugate, pnorm, solve_r
from .divergence import (
    DEFAULT_CHECKPOINTS,
    OperatorFamily,
    WeightSpec,
    hypothesis_probe,
    rademacher_signs,
)
from .operators import MatrixOperator, operator_norm

__all__ = [
    "DyadicGridFunction",
    "rademacher_function",
    "gram_matrix",
    "SharpnessReport",
    "require_lr",
    "example1_check",
    "example2_check",
    "example3_check",
]

_REL = 1e-9


@dataclass(frozen=True)
class DyadicGridFunction:
    """Piecewise-constant function on the 2**K dyadic cells of [0, 1]."""

    samples: np.ndarray
    K: int
    s: Exponent = field(default_factory=lambda: Exponent(2))

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float).ravel()
        if samples.size != 1 << self.K:
            raise ValueError(f"expected {1 << self.K} samples, got {samples.size}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "s", as_exponent(self.s))

    def norm(self, s=None) -> float:
        """L_s norm (2**-K sum |f_i|**s)**(1/s), largest modulus factored out."""
        s = self.s if s is None else as_exponent(s)
        a = np.abs(self.samples)
        m = float(a.max())
        if s.is_inf or m == 0.0:
            return m
        # the mean is taken before the root so +-1 samples give exactly 1
        sf = float(s)
        return m * (float(np.sum((a / m) ** sf)) / a.size) ** (1.0 / sf)

    def inner(self, other: "DyadicGridFunction") -> float:
        """L_2 inner product 2**-K sum f_i g_i."""
        if other.K != self.K:
            raise ValueError("grid depths differ")
        return float(np.dot(self.samples, other.samples)) / (1 << self.K)


def rademacher_function(k: int, K: int, s=2) -> DyadicGridFunction:
    if k > K:
        raise ValueError(f"r_{k} is not constant on cells of depth {K}")
    return DyadicGridFunction(rademacher_signs(k, K), K, s)


def gram_matrix(K: int, n: int | None = None) -> np.ndarray:
    """Gram matrix of r_1..r_n on the depth-K grid.

    Integer dot products of +-1 samples divided by 2**K, hence exact.
    """
    n = K if n is None else n
    R = np.vstack([rademacher_signs(k, K) for k in range(1, n + 1)]).astype(np.int64)
    return (R @ R.T) / float(1 << K)


@dataclass
class SharpnessReport:
    name: str
    p: Exponent
    r: Exponent
    weight_lr_norm: float
    norms_match: bool
    max_norm_error: float
    checkpoints: tuple
    rows: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def within_ceiling(self) -> bool:
        return all(row["within"] for row in self.rows)

    @property
    def passed(self) -> bool:
        return self.norms_match and self.within_ceiling and all(
            v for k, v in self.extra.items() if k.endswith("_ok"))

    @property
    def max_ratio(self) -> float:
        ratios = [row["ratio"] for row in self.rows if np.isfinite(row["ratio"])]
        return max(ratios, default=0.0)


def require_lr(weight: WeightSpec, r, checkpoints=None):
    """Gate: the weights must look summable in l_r (probe bounded so far)."""
    probe = hypothesis_probe(OperatorFamily("diagonal", weight, k_max=1), r, checkpoints)
    if probe.verdict != "bounded-so-far":
        raise PreconditionError(
            f"weights are not evidently in l_r for r = {as_exponent(r)} "
            f"(probe verdict {probe.verdict!r}); the sharpness scenario needs (a_k) in l_r"
        )
    return probe


def _sums(terms: np.ndarray, p: Exponent, cps) -> list:
    acc = np.maximum.accumulate(terms) if p.is_inf else np.cumsum(terms ** float(p))
    return [float(acc[c - 1]) for c in cps]


def _root(v: float, p: Exponent) -> float:
    return v if p.is_inf else v ** (1.0 / float(p))


def _rows(terms, p, cps, ceiling, sample) -> list:
    out = []
    for c, S in zip(cps, _sums(terms, p, cps)):
        lhs = _root(S, p)
        out.append({"sample": sample, "N": int(c), "S_N": S, "lhs": lhs, "ceiling": ceiling,
                    "ratio": lhs / ceiling if ceiling > 0 else (0.0 if lhs == 0 else np.inf),
                    "within": lhs <= ceiling * (1 + _REL) + 1e-12})
    return out


def _norm_check(a: np.ndarray, s, scalar: bool = False, limit: int = 64) -> float:
    """Largest gap between certified ||A_k|| and a_k over the first few k.

    ``scalar`` builds A_k = [a_k] on R; otherwise A_k = a_k e_k^T on l_s.
    """
    n = min(limit, a.size)
    errs = []
    for k in range(n):
        if scalar:
            row = np.array([[a[k]]])
        else:
            row = np.zeros((1, n))
            row[0, k] = a[k]
        est = operator_norm(MatrixOperator(row, s, 2))
        errs.append(abs(est.estimate - a[k]))
    return max(errs, default=0.0)


def example1_check(weight: WeightSpec, p, xs=None, checkpoints=None, n_samples: int = 8,
                   seed: int = 0) -> SharpnessReport:
    """A_k x = a_k x on R (rho = 1, so r = p)."""
    p = as_exponent(p)
    r = solve_r(p, 1)
    require_lr(weight, r, checkpoints)
    cps = tuple(checkpoints or DEFAULT_CHECKPOINTS)
    a = weight.values(cps[-1])
    err = _norm_check(a, 2, scalar=True)
    if xs is None:
        xs = np.random.default_rng(seed).standard_normal(n_samples)
    lr = pnorm(a, r)
    rows = []
    for i, x in enumerate(np.atleast_1d(np.asarray(xs, dtype=float))):
        rows += _rows(a * abs(x), p, cps, abs(x) * lr, i)
    return SharpnessReport("example1", p, r, lr, err == 0.0, err, cps, rows)


def example2_check(s, p, weight: WeightSpec, xs=None, checkpoints=None, n_samples: int = 100,
                   seed: int = 0) -> SharpnessReport:
    """A_k x = a_k x_k on l_s, s in (1, 2], p in [1, s], 1/p - 1/r = 1/s."""
    s, p = as_exponent(s), as_exponent(p)
    if not (Exponent(1) < s <= 2):
        raise PreconditionError(f"s = {s} must lie in (1, 2]")
    if not (1 <= p <= s):
        raise PreconditionError(f"p = {p} must lie in [1, s]")
    r = solve_r(p, conjugate(s))
    require_lr(weight, r, checkpoints)
    cps = tuple(checkpoints or DEFAULT_CHECKPOINTS)
    N = cps[-1]
    a = weight.values(N)
    err = _norm_check(a, s)
    if xs is None:
        rng = np.random.default_rng(seed)
        xs = [rng.standard_normal(N) / np.arange(1, N + 1) ** rng.uniform(0.0, 1.0)
              for _ in range(n_samples)]
    lr = pnorm(a, r)
    rows = []
    for i, x in enumerate(xs):
        x = np.asarray(x, dtype=float)
        xx = np.zeros(N)
        xx[: min(N, x.size)] = x[:N]
        rows += _rows(a * np.abs(xx), p, cps, lr * pnorm(x, s), i)
    return SharpnessReport("example2", p, r, lr, err <= 1e-12, err, cps, rows)


def example3_check(s, p, weight: WeightSpec, K: int = 12, xs=None, checkpoints=None,
                   n_samples: int = 100, seed: int = 0) -> SharpnessReport:
    """A_k x = a_k <x, r_k> on L_s of the dyadic grid, s >= 2, p in [1, 2]."""
    s, p = as_exponent(s), as_exponent(p)
    if s < 2:
        raise PreconditionError(f"s = {s} must be at least 2")
    if not (1 <= p <= 2):
        raise PreconditionError(f"p = {p} must lie in [1, 2]")
    r = solve_r(p, 2)
    require_lr(weight, r)
    cps = tuple(c for c in (checkpoints or range(1, K + 1)) if c <= K)
    if not cps:
        raise ValueError("checkpoints must include an index <= K")
    a = weight.values(K)

    G = gram_matrix(K)
    gram_ok = bool(np.array_equal(G, np.eye(K)))

    # ||A_k|| = a_k: lower side A_k r_k = a_k with ||r_k||_{L_s} = 1,
    # upper side from the certified norm of the discretised functional
    fam = OperatorFamily("rademacher", weight, s=s, depth=K)
    rs = [rademacher_function(k, K, s) for k in range(1, K + 1)]
    lower = [a[k] * rs[k].inner(rs[k]) for k in range(K)]
    unit_ok = all(f.norm() == 1.0 for f in rs)
    cert = [operator_norm(fam.operator(k)).estimate for k in range(1, K + 1)]
    err = max(max(abs(c - ak) for c, ak in zip(cert, a)),
              max(abs(lo - ak) for lo, ak in zip(lower, a)))

    if xs is None:
        rng = np.random.default_rng(seed)
        xs = [rng.standard_normal(1 << K) for _ in range(n_samples)]
    lr = pnorm(a, r)
    rows, chain_ok, bessel_ok = [], True, True
    R = np.vstack([f.samples for f in rs])
    for i, x in enumerate(xs):
        f = x if isinstance(x, DyadicGridFunction) else DyadicGridFunction(x, K, s)
        coeffs = (R @ f.samples) / (1 << K)
        l1, ls, l2 = f.norm(1), f.norm(s), f.norm(2)
        images = a * np.abs(coeffs)
        chain_ok &= bool(np.all(images <= a * l1 * (1 + _REL) + 1e-15)) and l1 <= ls * (1 + _REL)
        bessel = float(np.dot(coeffs, coeffs))
        bessel_ok &= bessel <= l2 ** 2 * (1 + _REL)
        rows += _rows(images, p, cps, lr * np.sqrt(bessel), i)
    extra = {"gram": G.tolist(), "gram_ok": gram_ok, "unit_norm_ok": unit_ok,
             "upper_chain_ok": bool(chain_ok), "bessel_ok": bool(bessel_ok),
             "certified_norms": cert}
    return SharpnessReport("example3", p, r, lr, err <= 1e-6, err, cps, rows, extra)
