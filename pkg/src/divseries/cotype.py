"""Sign-maximum functional, M-cotype ratios and related averages."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Exponent, PNormedVector, as_exponent, pnorm, sign_chunks

__all__ = [
    "MAX_EXHAUSTIVE",
    "SignPattern",
    "CotypeEstimate",
    "sign_max",
    "cotype_ratio",
    "estimate_cotype_constant",
    "unit_modulus_max_sampled",
    "rademacher_average",
]

MAX_EXHAUSTIVE = 24


@dataclass(frozen=True)
class SignPattern:
    signs: tuple

    def __post_init__(self):
        signs = tuple(int(e) for e in self.signs)
        if any(e not in (1, -1) for e in signs):
            raise ValueError("sign pattern entries must be +1 or -1")
        object.__setattr__(self, "signs", signs)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.signs, dtype=dtype or float)

    def __len__(self):
        return len(self.signs)


def _as_rows(vectors) -> np.ndarray:
    """Stack a tuple of vectors as rows of an (n, d) array."""
    if isinstance(vectors, np.ndarray):
        V = vectors
    else:
        V = [v.coords if isinstance(v, PNormedVector) else np.asarray(v) for v in vectors]
        if not V:
            return np.zeros((0, 0))
        V = np.vstack([np.atleast_1d(v) for v in V])
    if V.ndim == 1:
        V = V[:, None]
    return V


def _column_norms(Y: np.ndarray, s: Exponent) -> np.ndarray:
    A = np.abs(Y)
    if s.is_inf:
        return A.max(axis=0)
    if s == 1:
        return A.sum(axis=0)
    if s == 2:
        return np.sqrt(np.einsum("ij,ij->j", A, A))
    return np.array([pnorm(A[:, j], s) for j in range(A.shape[1])])


def _check_size(n: int):
    if n > MAX_EXHAUSTIVE:
        raise ValueError(f"exhaustive enumeration limited to n <= {MAX_EXHAUSTIVE}, got {n}")


def sign_max(vectors, norm_exponent) -> tuple[float, SignPattern]:
    """max over eps in {+-1}^n of ||sum eps_k v_k||.

    Exact enumeration of the 2**(n-1) patterns with eps_1 = +1. Complex
    vectors are normed through their modulus vector. Ties go to the
    lexicographically smallest pattern.
    """
    s = as_exponent(norm_exponent)
    V = _as_rows(vectors)
    n = V.shape[0]
    _check_size(n)
    if n == 0:
        return 0.0, SignPattern(())
    best_val, best = -1.0, None
    for S in sign_chunks(n):
        vals = _column_norms(V.T @ S, s)
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best = float(vals[j]), S[:, j]
    return best_val, SignPattern(best)


def cotype_ratio(vectors, rho, norm_exponent) -> float:
    """sign_max / (sum ||v_k||^rho)^(1/rho)."""
    V = _as_rows(vectors)
    s = as_exponent(norm_exponent)
    norms = _column_norms(V.T, s)
    denom = pnorm(norms, rho)
    if denom == 0.0:
        raise ValueError("cotype ratio undefined for an all-zero tuple")
    return sign_max(V, s)[0] / denom


@dataclass(frozen=True)
class CotypeEstimate:
    rho: Exponent
    norm_exponent: Exponent
    constant_upper: float
    minimizing_tuple: tuple
    budget_used: int
    analytic_lower: float | None = None

    def reevaluate(self) -> float:
        return cotype_ratio(self.minimizing_tuple, self.rho, self.norm_exponent)


def _known_lower(dim: int, s: Exponent, rho: Exponent) -> float | None:
    if dim == 1:
        return 1.0
    if s == 2 and rho >= 2:
        return 1.0
    return None


def estimate_cotype_constant(dim: int, norm_exponent, rho, n_max: int = 6,
                             trials: int = 64, steps: int = 200, seed: int = 0,
                             refine: bool = True) -> CotypeEstimate:
    """Witnessed upper bound on the M-cotype constant of l_s^dim at rho.

    Candidates: standard basis tuples, then ``trials`` seeded Gaussian tuples
    of length 1..n_max. With ``refine`` each random tuple is pushed down by
    coordinate descent on the ratio. The result is the smallest ratio seen,
    which bounds the true constant from above.
    """
    s = as_exponent(norm_exponent)
    rho = as_exponent(rho)
    if rho.is_inf:
        raise ValueError("rho must be finite")
    rng = np.random.default_rng(seed)
    evals = 0
    candidates = [np.eye(dim)[: min(k, dim)] for k in range(1, min(n_max, dim) + 1)]
    for _ in range(trials):
        n = int(rng.integers(1, n_max + 1))
        candidates.append(rng.standard_normal((n, dim)))

    best_val, best_V = np.inf, None
    for idx, V in enumerate(candidates):
        val = cotype_ratio(V, rho, s)
        evals += 1
        if refine and idx >= min(n_max, dim):
            h = 0.5
            for _ in range(steps):
                i, j = int(rng.integers(V.shape[0])), int(rng.integers(dim))
                improved = False
                for step in (h, -h):
                    W = V.copy()
                    W[i, j] += step
                    if not np.any(W[i]):
                        continue
                    w_val = cotype_ratio(W, rho, s)
                    evals += 1
                    if w_val < val:
                        V, val, improved = W, w_val, True
                        break
                if not improved:
                    h *= 0.9
        if val < best_val:
            best_val, best_V = val, V
    return CotypeEstimate(
        rho=rho,
        norm_exponent=s,
        constant_upper=float(best_val),
        minimizing_tuple=tuple(PNormedVector(v, s) for v in best_V),
        budget_used=evals,
        analytic_lower=_known_lower(dim, s, rho),
    )


def unit_modulus_max_sampled(vectors, norm_exponent, samples: int = 4096, seed: int = 0,
                             restrict_to_signs: bool = False) -> float:
    """Sampled max of ||sum alpha_k v_k|| over |alpha_k| = 1.

    ``vectors`` is complex (n, d), or real pairs of shape (n, d, 2). With
    ``restrict_to_signs`` the coefficients range over all of {+-1}^n
    instead, which reproduces :func:`sign_max` exactly.
    """
    V = np.asarray(vectors)
    if V.ndim == 3 and V.shape[-1] == 2 and not np.iscomplexobj(V):
        V = V[..., 0] + 1j * V[..., 1]
    V = _as_rows(V).astype(complex)
    s = as_exponent(norm_exponent)
    n = V.shape[0]
    if restrict_to_signs:
        return sign_max(V, s)[0]
    rng = np.random.default_rng(seed)
    phases = np.exp(2j * np.pi * rng.random((n, samples)))
    phases[:, 0] = 1.0
    return float(_column_norms(V.T @ phases, s).max())


def rademacher_average(vectors, norm_exponent) -> float:
    """Exact mean of ||sum eps_k v_k|| over all 2**n equally likely signs."""
    s = as_exponent(norm_exponent)
    V = _as_rows(vectors)
    n = V.shape[0]
    _check_size(n)
    if n == 0:
        return 0.0
    total, count = 0.0, 0
    # global sign flip leaves the norm unchanged, so the canonical half suffices
    for S in sign_chunks(n):
        vals = _column_norms(V.T @ S, s)
        total += float(vals.sum())
        count += vals.size
    return total / count
