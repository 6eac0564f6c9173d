"""Operator families, partial-sum probes and constructive divergence witnesses.

A family is a deterministic sequence A_1, A_2, ... truncated at ``k_max``.
Probes report partial sums S_N = sum_{k <= N} ||A_k x||^p at checkpoints
(a running max when p = inf) and classify their growth. They never claim
divergence; "growing" means the last checkpoint passed the declared target
or the fitted log-log slope is clearly positive.

The uniform-boundedness step that turns ||B_n|| -> inf into a single
unbounded orbit is replaced here by an explicit gliding hump: block witnesses
u_j combined with coefficients 3**-j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .core import (
    INF,
    Exponent,
    PreconditionError,
    align,
    as_exponent,
    conjugate,
    pnorm,
    solve_r,
)
from .operators import (
    MatrixOperator,
    SearchBudget,
    StackedOperator,
    operator_norm,
    stacked_norm,
)

__all__ = [
    "DEFAULT_CHECKPOINTS",
    "WeightSpec",
    "OperatorFamily",
    "DivergenceProbeReport",
    "BlockPlan",
    "BlockReport",
    "DensityReport",
    "classify",
    "hypothesis_probe",
    "partial_sums",
    "build_divergence_witness_T1",
    "build_divergence_witness_T2",
    "perturbation_density_check",
    "rademacher_signs",
]

DEFAULT_CHECKPOINTS = (10, 100, 1_000, 10_000, 100_000)
GROWTH_SLOPE = 0.2
FLAT_SLOPE = 0.01


@dataclass(frozen=True)
class WeightSpec:
    """Nonnegative weights a_k, k >= 1.

    kinds: ``explicit`` (values; zero past the list), ``power``
    (scale * k**-alpha), ``log`` (scale / log(k + c)), ``constant`` (value),
    ``geometric`` (scale * ratio**k).
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("explicit", "power", "log", "constant", "geometric"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "explicit" and np.any(np.asarray(self.params.get("values", [])) < 0):
            raise ValueError("explicit weights must be nonnegative")
        if self.kind == "log" and self.params.get("c", 2.0) <= 0:
            raise ValueError("log weights need c > 0 so that log(k + c) > 0")

    def values(self, n: int) -> np.ndarray:
        k = np.arange(1, n + 1, dtype=float)
        p = self.params
        scale = float(p.get("scale", 1.0))
        if self.kind == "explicit":
            vals = np.asarray(p.get("values", []), dtype=float)[:n]
            out = np.zeros(n)
            out[: vals.size] = vals
            return out
        if self.kind == "power":
            return scale * k ** (-float(p.get("alpha", 1.0)))
        if self.kind == "log":
            return scale / np.log(k + float(p.get("c", 2.0)))
        if self.kind == "constant":
            return np.full(n, float(p.get("value", 1.0)))
        return scale * float(p.get("ratio", 0.5)) ** k

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}


def rademacher_signs(k: int, depth: int) -> np.ndarray:
    """sign sin(2**k pi t) on the 2**depth dyadic cells of [0, 1].

    On cell i the sign is (-1)**floor(i / 2**(depth - k)); integer arithmetic
    only, so the samples are exact.
    """
    if not 1 <= k <= depth:
        raise ValueError(f"need 1 <= k <= depth, got k={k}, depth={depth}")
    i = np.arange(1 << depth)
    return np.where((i >> (depth - k)) & 1, -1.0, 1.0)


@dataclass
class OperatorFamily:
    """A_1, A_2, ... on a finite-dimensional domain with exponent ``s``.

    kinds:
      ``diagonal``    A_k x = a_k x_k on l_s^{k_max}
      ``rademacher``  A_k f = a_k <f, r_k> on L_s of the 2**depth dyadic grid,
                      written in l_s coordinates g = 2**(-depth/s) f
      ``explicit``    the given matrices
      ``random``      seeded Gaussian (rows x dim) matrices rescaled so the
                      certified norm equals a_k
    """

    kind: str
    weight: WeightSpec = field(default_factory=lambda: WeightSpec("constant"))
    s: Exponent = field(default_factory=lambda: Exponent(2))
    k_max: int = 100_000
    depth: int = 12
    dim: int = 4
    rows: int = 2
    codomain_exponent: Exponent = field(default_factory=lambda: Exponent(2))
    matrices: tuple = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("diagonal", "rademacher", "explicit", "random"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        self.s = as_exponent(self.s)
        self.codomain_exponent = as_exponent(self.codomain_exponent)
        if self.kind == "rademacher":
            self.k_max = min(self.k_max, self.depth)
        if self.kind == "explicit":
            self.matrices = tuple(np.atleast_2d(np.asarray(m, dtype=float)) for m in self.matrices)
            self.k_max = len(self.matrices)
            if self.matrices:
                self.dim = self.matrices[0].shape[1]
                if any(m.shape[1] != self.dim for m in self.matrices):
                    raise ValueError("explicit matrices must share the domain dimension")
        self._cache: dict[int, MatrixOperator] = {}

    @property
    def analytic_norms(self) -> bool:
        return self.kind in ("diagonal", "rademacher")

    @property
    def domain_dim(self) -> int:
        if self.kind == "diagonal":
            return self.k_max
        if self.kind == "rademacher":
            return 1 << self.depth
        return self.dim

    def _check_index(self, k: int):
        if not 1 <= k <= self.k_max:
            raise ValueError(f"operator index {k} outside 1..{self.k_max}")

    def operator(self, k: int) -> MatrixOperator:
        self._check_index(k)
        if k in self._cache:
            return self._cache[k]
        a = float(self.weight.values(k)[-1])
        if self.kind == "diagonal":
            row = np.zeros((1, self.domain_dim))
            row[0, k - 1] = a
            op = MatrixOperator(row, self.s, self.codomain_exponent)
        elif self.kind == "rademacher":
            t = conjugate(self.s)
            scale = 1.0 if t.is_inf else 2.0 ** (-self.depth / float(t))
            row = a * scale * rademacher_signs(k, self.depth)[None, :]
            op = MatrixOperator(row, self.s, self.codomain_exponent)
        elif self.kind == "explicit":
            op = MatrixOperator(self.matrices[k - 1], self.s, self.codomain_exponent)
        else:
            rng = np.random.default_rng([self.seed, k])
            G = MatrixOperator(rng.standard_normal((self.rows, self.dim)), self.s,
                               self.codomain_exponent)
            cert = operator_norm(G, seed=k).certified_lower
            op = G.scaled(a / cert if cert > 0 else 0.0)
        self._cache[k] = op
        return op

    def norms(self, n: int) -> np.ndarray:
        """||A_k|| for k = 1..n.

        Analytic kinds return the weights (valid for every k, beyond k_max
        too); the others return certified norms and stop at k_max.
        """
        if self.analytic_norms:
            return self.weight.values(n)
        if n > self.k_max:
            raise ValueError(f"family truncated at k_max = {self.k_max}")
        return np.array([operator_norm(self.operator(k), seed=k).certified_lower
                         for k in range(1, n + 1)])

    def to_coords(self, f) -> np.ndarray:
        """Grid samples of a function on [0, 1] -> isometric l_s coordinates."""
        f = np.asarray(f, dtype=float)
        if self.kind != "rademacher":
            return f
        return f * (1.0 if self.s.is_inf else 2.0 ** (-self.depth / float(self.s)))

    def _pad(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        if x.size > self.domain_dim:
            raise ValueError(f"vector of length {x.size} exceeds domain dimension {self.domain_dim}")
        if x.size < self.domain_dim:
            x = np.concatenate([x, np.zeros(self.domain_dim - x.size)])
        return x

    def images(self, x, n: int) -> np.ndarray:
        """||A_k x|| for k = 1..n."""
        if n > self.k_max:
            raise ValueError(f"family truncated at k_max = {self.k_max}")
        x = self._pad(x)
        if self.kind == "diagonal":
            return self.weight.values(n) * np.abs(x[:n])
        return np.array([pnorm(self.operator(k).matrix @ x, self.codomain_exponent)
                         for k in range(1, n + 1)])

    def stacked(self, start: int, end: int, p) -> StackedOperator:
        """B x = (A_{start+1} x, ..., A_end x) into l_p."""
        return StackedOperator(tuple(self.operator(k) for k in range(start + 1, end + 1)), p)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "weight": self.weight.to_dict(), "s": str(self.s),
             "k_max": self.k_max, "codomain_exponent": str(self.codomain_exponent)}
        if self.kind == "rademacher":
            d["depth"] = self.depth
        if self.kind == "random":
            d.update(dim=self.dim, rows=self.rows, seed=self.seed)
        if self.kind == "explicit":
            d["matrices"] = [m.tolist() for m in self.matrices]
        return d


@dataclass(frozen=True)
class DivergenceProbeReport:
    p: Exponent
    checkpoints: tuple
    sums: tuple
    slope: float
    verdict: str
    target: float | None = None
    notes: dict = field(default_factory=dict)

    def table(self) -> list:
        return list(zip(self.checkpoints, self.sums))


def classify(checkpoints, sums, target=None) -> tuple[float, str]:
    """(slope, verdict) from the last two checkpoints.

    The slope is d log S / d log N between them. With a target, "growing"
    means S at the last checkpoint reached it. Without one, a slope of at
    least 0.2 counts as growing and at most 0.01 as bounded so far.
    """
    cps = np.asarray(checkpoints, dtype=float)
    S = np.asarray(sums, dtype=float)
    if S.size == 0 or S[-1] == 0.0:
        return 0.0, "bounded-so-far"
    slope = 0.0
    if S.size >= 2 and S[-2] > 0 and cps[-1] > cps[-2]:
        slope = math.log(S[-1] / S[-2]) / math.log(cps[-1] / cps[-2])
    elif S.size >= 2 and S[-2] == 0:
        slope = math.inf
    if target is not None and S[-1] >= target:
        return slope, "growing"
    if target is None and slope >= GROWTH_SLOPE:
        return slope, "growing"
    if slope <= FLAT_SLOPE:
        return slope, "bounded-so-far"
    return slope, "inconclusive"


def _accumulate(terms: np.ndarray, p: Exponent) -> np.ndarray:
    if p.is_inf:
        return np.maximum.accumulate(terms)
    if p == 1:
        return np.cumsum(terms)
    return np.cumsum(terms ** float(p))


def _report(terms, p, checkpoints, target=None, notes=None) -> DivergenceProbeReport:
    cps = tuple(int(c) for c in checkpoints)
    acc = _accumulate(np.asarray(terms, dtype=float), p)
    sums = tuple(float(acc[c - 1]) for c in cps)
    slope, verdict = classify(cps, sums, target)
    return DivergenceProbeReport(p, cps, sums, slope, verdict, target, dict(notes or {}))


def _checkpoints(checkpoints, limit: int | None) -> tuple:
    cps = sorted({int(c) for c in (checkpoints or DEFAULT_CHECKPOINTS)})
    if limit is not None:
        cps = [c for c in cps if c <= limit] or [limit]
    if not cps or cps[0] < 1:
        raise ValueError("checkpoints must be positive integers")
    return tuple(cps)


def hypothesis_probe(family: OperatorFamily, r, checkpoints=None, target=None) -> DivergenceProbeReport:
    """Partial sums of ||A_k||**r (running max for r = inf)."""
    r = as_exponent(r)
    cps = _checkpoints(checkpoints, None if family.analytic_norms else family.k_max)
    norms = family.norms(cps[-1])
    return _report(norms, r, cps, target, {"quantity": "operator norms"})


def partial_sums(family: OperatorFamily, x, p, checkpoints=None, target=None) -> DivergenceProbeReport:
    """S_N(x, p) = sum_{k <= N} ||A_k x||**p at the checkpoints."""
    p = as_exponent(p)
    cps = _checkpoints(checkpoints, family.k_max)
    terms = family.images(x, cps[-1])
    return _report(terms, p, cps, target, {"quantity": "orbit"})


def _diagonal_block_witness(a: np.ndarray, s: Exponent, p: Exponent):
    """Unit x on l_s maximising ||(a_k x_k)||_p, and that maximum."""
    if not np.any(a):
        return np.zeros_like(a), 0.0
    if p >= s:
        j = int(np.argmax(a))
        x = np.zeros_like(a)
        x[j] = 1.0
        return x, float(a[j])
    inv_u = p.reciprocal() - s.reciprocal()
    u = Exponent.from_reciprocal(inv_u)
    if s.is_inf:
        x = (a > 0).astype(float)
    else:
        x = np.zeros_like(a)
        pos = a > 0
        logs = np.log(a[pos])
        x[pos] = np.exp(float(u) / float(s) * (logs - logs.max()))
        x /= pnorm(x, s)
    return x, pnorm(a, u)


def _sum_value(terms: np.ndarray, p: Exponent) -> float:
    """S for a finite list of orbit norms."""
    if terms.size == 0:
        return 0.0
    return float(terms.max()) if p.is_inf else float(np.sum(terms ** float(p)))


def build_divergence_witness_T1(family: OperatorFamily, p, rho, C: float = 1.0,
                                target: float = 100.0, budget: SearchBudget | None = None,
                                seed: int = 0, checkpoints=None, max_humps: int = 8):
    """Unit x0 with S_N(x0, p) >= target for some N <= k_max.

    Refuses (PreconditionError) unless p lies in [1, rho/(rho-1)] and the
    probe of (||A_k||) at r = solve_r(p, rho) is growing. Diagonal families
    use the closed form: Hölder weights on the first block whose norm
    reaches the target. Others run the gliding hump over stacked norms.
    Returns ``(x0, report)``; the report is reproducible with
    :func:`partial_sums` at ``report.checkpoints``.
    """
    p = as_exponent(p)
    r = solve_r(p, rho)
    probe = hypothesis_probe(family, r, checkpoints)
    if probe.verdict != "growing":
        raise PreconditionError(
            f"hypothesis (||A_k||) not in l_r, r = {r}, is not supported: probe verdict "
            f"{probe.verdict!r} (sums {probe.sums})"
        )
    cps = _checkpoints(checkpoints, family.k_max)
    notes = {"r": str(r), "rho": str(as_exponent(rho)), "C": C,
             "hypothesis_sums": list(probe.sums)}

    if family.kind == "diagonal":
        a = family.weight.values(family.k_max)
        if p.is_inf or p >= family.s:
            block = np.maximum.accumulate(a)
        else:
            u = Exponent.from_reciprocal(p.reciprocal() - family.s.reciprocal())
            block = np.cumsum(a ** float(u)) ** (1.0 / float(u))
        reach = block if p.is_inf else block ** float(p)
        hits = np.nonzero(reach >= target)[0]
        N = int(hits[0]) + 1 if hits.size else family.k_max
        x_block, block_norm_value = _diagonal_block_witness(a[:N], family.s, p)
        x0 = np.zeros(family.domain_dim)
        x0[:N] = x_block
        notes.update(method="closed-form", block_end=N, block_norm=block_norm_value,
                     lemma_lower_bound=C * pnorm(a[:N], r))
        rep = partial_sums(family, x0, p, sorted(set(cps) | {N}), target)
        rep.notes.update(notes)
        return x0, rep

    # gliding hump
    rng_seed = seed
    grid = sorted({min(2 ** i, family.k_max) for i in range(0, 40) if 2 ** i <= family.k_max}
                  | {family.k_max})
    x0 = np.zeros(family.domain_dim)
    humps, n_prev, best_single = [], 0, None
    for j in range(1, max_humps + 1):
        c = 3.0 ** (-j)
        placed = False
        for N in grid:
            if N <= n_prev:
                continue
            Bn = family.stacked(0, N, p)
            est = stacked_norm(Bn, budget, rng_seed + N)
            if best_single is None or est.certified_lower > best_single[1]:
                best_single = (N, est.certified_lower, est.witness.coords)
            interference = _sum_value(family.images(x0, N), p)
            interference = interference if p.is_inf else interference ** (1 / float(p))
            if c * est.certified_lower >= j + 1 + interference:
                u = est.witness.coords / est.witness.norm()
                x0 = x0 + c * u
                humps.append({"index": j, "block_end": N, "coefficient": c,
                              "certified_norm": est.certified_lower, "method": est.method})
                n_prev, placed = N, True
                break
        if not placed:
            break
        y = x0 / pnorm(x0, family.s)
        if _sum_value(family.images(y, family.k_max), p) >= target:
            break
    if not humps and best_single is not None:
        N, val, w = best_single
        x0 = w.copy()
        humps.append({"index": 0, "block_end": N, "coefficient": 1.0,
                      "certified_norm": val, "method": "best-single-block"})
    nx = pnorm(x0, family.s)
    if nx > 0:
        x0 = x0 / nx
    notes.update(method="gliding-hump", humps=humps)
    rep = partial_sums(family, x0, p, sorted(set(cps) | {h["block_end"] for h in humps}), target)
    rep.notes.update(notes)
    return x0, rep


@dataclass(frozen=True)
class BlockPlan:
    ends: tuple
    p_schedule: tuple
    r_schedule: tuple
    targets: tuple
    lemma_lower_bounds: tuple
    block_norms: tuple
    complete: bool = True

    def __post_init__(self):
        if self.ends[0] != 0 or any(b <= a for a, b in zip(self.ends, self.ends[1:])):
            raise ValueError("block ends must start at 0 and increase strictly")
        ps = [float(p) for p in self.p_schedule]
        if any(b < a for a, b in zip(ps, ps[1:])):
            raise ValueError("exponent schedule must be nondecreasing")

    def block(self, n: int) -> tuple:
        """(start, end] of block n, 1-based."""
        return self.ends[n - 1], self.ends[n]


@dataclass(frozen=True)
class BlockReport:
    achieved: tuple
    targets: tuple
    block_sums: tuple
    scale: float
    witness_norm: float

    @property
    def all_met(self) -> bool:
        return all(a >= t for a, t in zip(self.achieved, self.targets))


def default_schedule(p0: Exponent, n: int) -> list:
    """p_n = p0 - (p0 - 1) / 2**n, or p_n = 1 + n when p0 = inf."""
    if p0.is_inf:
        return [Exponent(1 + i) for i in range(1, n + 1)]
    v = p0.value
    return [Exponent(v - (v - 1) / 2 ** i) for i in range(1, n + 1)]


def build_divergence_witness_T2(family: OperatorFamily, p0, rho, C: float = 1.0,
                                targets=(1.0, 2.0, 3.0), budget: SearchBudget | None = None,
                                seed: int = 0, schedule=None, first_block: int = 16,
                                growth: int = 8, checkpoints=None):
    """Block plan and witness x0 with ||B_n x0||_{p_n} >= targets[n-1].

    Blocks have lengths first_block * growth**(n-1), truncated at k_max.
    Each block contributes a unit norming witness u_n with weight 3**-n; the
    sum is scaled by the smallest factor that meets every target. The plan
    records p_n, r_n, the lemma lower bounds C ||(a_k)||_{r_n} and the
    certified block norms ||B_n||.

    Returns ``(x0, plan, report)``.
    """
    p0 = as_exponent(p0)
    if p0 <= 1:
        raise PreconditionError(f"p0 = {p0} must exceed 1")
    rho_e = as_exponent(rho)
    r0 = solve_r(p0, rho_e)
    if r0.is_inf:
        samples = [rho_e, Exponent(1.5 * float(rho_e)), Exponent(2 * float(rho_e))]
    else:
        span = float(r0) - float(rho_e)
        samples = [Exponent(float(rho_e) + f * span) for f in (0.0, 0.5, 0.75)]
    probes = [hypothesis_probe(family, r, checkpoints) for r in samples]
    for r, pr in zip(samples, probes):
        if pr.verdict != "growing":
            raise PreconditionError(
                f"hypothesis (||A_k||) not in l_r for r in [rho, r0) is not supported: "
                f"probe at r = {r} is {pr.verdict!r}"
            )
    n_blocks = len(targets)
    ps = [as_exponent(p) for p in schedule] if schedule is not None else default_schedule(p0, n_blocks)
    if len(ps) != n_blocks:
        raise ValueError("schedule and targets must have the same length")
    if any(p < 1 or p >= p0 for p in ps):
        raise PreconditionError("every p_n must lie in [1, p0)")
    rs = [solve_r(p, rho_e) for p in ps]

    ends, complete = [0], True
    for n in range(1, n_blocks + 1):
        end = ends[-1] + first_block * growth ** (n - 1)
        if end > family.k_max:
            end = family.k_max
            complete = False
        if end <= ends[-1]:
            break
        ends.append(end)
    n_built = len(ends) - 1

    a_all = family.norms(ends[-1])
    units, bounds, bnorms = [], [], []
    for n in range(1, n_built + 1):
        lo, hi = ends[n - 1], ends[n]
        p = ps[n - 1]
        bounds.append(C * pnorm(a_all[lo:hi], rs[n - 1]))
        u = np.zeros(family.domain_dim)
        if family.kind == "diagonal":
            xb, val = _diagonal_block_witness(a_all[lo:hi], family.s, p)
            u[lo:hi] = xb
        else:
            est = stacked_norm(family.stacked(lo, hi, p), budget, seed + n)
            u = est.witness.coords / max(est.witness.norm(), 1e-300)
            val = est.certified_lower
        units.append(u)
        bnorms.append(val)

    y = sum(3.0 ** (-n) * u for n, u in enumerate(units, start=1))

    def block_value(x, n):
        lo, hi = ends[n - 1], ends[n]
        terms = family.images(x, hi)[lo:hi]
        return pnorm(terms, ps[n - 1])

    base = [block_value(y, n) for n in range(1, n_built + 1)]
    if any(b == 0 for b in base):
        complete = False
        scale = 1.0
    else:
        scale = max(t / b for t, b in zip(targets, base))
    x0 = scale * y
    achieved = tuple(block_value(x0, n) for n in range(1, n_built + 1))
    block_sums = tuple(
        _sum_value(family.images(x0, ends[n])[ends[n - 1]:ends[n]], ps[n - 1])
        for n in range(1, n_built + 1)
    )
    plan = BlockPlan(tuple(ends), tuple(ps[:n_built]), tuple(rs[:n_built]),
                     tuple(float(t) for t in targets[:n_built]), tuple(bounds), tuple(bnorms),
                     complete and n_built == n_blocks)
    report = BlockReport(achieved, tuple(float(t) for t in targets[:n_built]), block_sums,
                         float(scale), pnorm(x0, family.s))
    return x0, plan, report


@dataclass(frozen=True)
class DensityReport:
    p: Exponent
    lambdas: tuple
    witness_sums: tuple
    rows: tuple
    stagnant_counts: tuple

    @property
    def consistent(self) -> bool:
        """At most one stagnating lambda per probe."""
        return all(c <= 1 for c in self.stagnant_counts)


def perturbation_density_check(family: OperatorFamily, p, x0, probes, lambdas,
                               checkpoints=None) -> DensityReport:
    """Partial sums of x + lambda x0 for each probe x and lambda != 0.

    With W = S_N(x0)**(1/p) at the last checkpoint and g the smallest gap
    between sampled lambdas, lambda is stagnant for a probe when
    S_N(x + lambda x0)**(1/p) < min(|lambda|, g) * W / 2. Two stagnant
    lambdas would give |lambda_1 - lambda_2| W < g W by Minkowski, so at most
    one can occur. The Minkowski floor |lambda| W - S_N(x)**(1/p) is
    recorded and checked as well.
    """
    p = as_exponent(p)
    cps = _checkpoints(checkpoints, family.k_max)
    x0 = family._pad(x0)
    wit = partial_sums(family, x0, p, cps)
    root = (lambda v: v) if p.is_inf else (lambda v: v ** (1.0 / float(p)))
    W = root(wit.sums[-1])
    distinct = sorted({float(l) for l in lambdas})
    gap = min((b - a for a, b in zip(distinct, distinct[1:])), default=math.inf)
    rows, counts = [], []
    for i, x in enumerate(probes):
        x = family._pad(x)
        own = root(partial_sums(family, x, p, cps).sums[-1])
        count = 0
        for lam in lambdas:
            if lam == 0:
                raise ValueError("lambda must be nonzero")
            rep = partial_sums(family, x + lam * x0, p, cps)
            val = root(rep.sums[-1])
            ratio = val / (abs(lam) * W) if W > 0 else 0.0
            floor = max(abs(lam) * W - own, 0.0)
            stagnant = val < min(abs(lam), gap) * W / 2
            count += stagnant
            rows.append({"probe": i, "lambda": float(lam), "sums": rep.sums,
                         "growth_ratio": ratio, "minkowski_floor": floor,
                         "floor_holds": val >= floor - 1e-12 * (abs(lam) * W + own),
                         "stagnant": bool(stagnant)})
        counts.append(count)
    return DensityReport(p, tuple(float(l) for l in lambdas), wit.sums, tuple(rows), tuple(counts))
