"""Extended exponents on [1, inf], p-norms and finite l_s direct sums.

Exponents are kept as exact fractions whenever the input is a rational with a
small denominator, so chains such as ``1/p - 1/r = 1 - 1/rho`` close exactly.
Infinity is its own state, never a large float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

import numpy as np

__all__ = [
    "PreconditionError",
    "Exponent",
    "INF",
    "as_exponent",
    "conjugate",
    "solve_r",
    "solve_r_from_q",
    "pnorm",
    "PNormedVector",
    "DirectSumElement",
    "direct_sum_norm",
    "dual_pairing",
    "align",
    "sign_chunks",
    "row_pnorms",
    "align_rows",
]

_MAX_DENOMINATOR = 10_000
_FLOAT_TOL = 1e-12


class PreconditionError(ValueError):
    """A hypothesis required by a construction does not hold."""


class Exponent:
    """A value in [1, inf].

    Stored as a :class:`fractions.Fraction` when the input is rational with a
    denominator of at most 10**4, as a float otherwise, or as the infinite
    state.
    """

    __slots__ = ("_value", "_inf", "_f", "_conj")

    def __init__(self, value: "Exponent | int | float | Fraction | str"):
        self._conj = None
        if isinstance(value, Exponent):
            self._value, self._inf, self._f = value._value, value._inf, value._f
            return
        if isinstance(value, str):
            text = value.strip().lower()
            if text in ("inf", "infinity", "oo", "∞"):
                value = math.inf
            else:
                value = Fraction(text)
        if isinstance(value, float) and math.isinf(value):
            if value < 0:
                raise ValueError("exponent must be >= 1")
            self._value, self._inf, self._f = None, True, math.inf
            return
        if isinstance(value, float):
            if math.isnan(value):
                raise ValueError("exponent must be >= 1, got nan")
            frac = Fraction(value).limit_denominator(_MAX_DENOMINATOR)
            value = frac if float(frac) == value else value
        elif not isinstance(value, Fraction):
            value = Fraction(value)
        if value < 1:
            raise ValueError(f"exponent must be >= 1, got {value}")
        self._value, self._inf, self._f = value, False, float(value)

    # -- basic properties ------------------------------------------------
    @property
    def is_inf(self) -> bool:
        return self._inf

    @property
    def value(self) -> Fraction | float:
        """The exponent as a Fraction or float (math.inf for infinity)."""
        return math.inf if self._inf else self._value

    @property
    def is_exact(self) -> bool:
        return self._inf or isinstance(self._value, Fraction)

    def reciprocal(self) -> Fraction | float:
        """1/e with the convention 1/inf = 0."""
        if self._inf:
            return Fraction(0)
        return 1 / self._value

    @classmethod
    def from_reciprocal(cls, inv: Fraction | float) -> "Exponent":
        if inv == 0:
            return INF
        if isinstance(inv, float) and abs(inv) <= _FLOAT_TOL:
            return INF
        return cls(1 / inv)

    def conjugate(self) -> "Exponent":
        return conjugate(self)

    def __float__(self) -> float:
        return self._f

    # -- comparisons -----------------------------------------------------
    def _key(self) -> float:
        return float(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Exponent):
            try:
                other = Exponent(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self._inf or other._inf:
            return self._inf and other._inf
        if self._f == other._f:
            return True
        if self.is_exact and other.is_exact:
            return self._value == other._value
        return abs(self._f - other._f) <= _FLOAT_TOL * max(1.0, abs(self._f))

    def __hash__(self) -> int:
        if self._inf:
            return hash(math.inf)
        return hash(self._value) if self.is_exact else hash(float(self._value))

    def __lt__(self, other) -> bool:
        other = as_exponent(other)
        return self != other and self._key() < other._key()

    def __le__(self, other) -> bool:
        other = as_exponent(other)
        return self == other or self._key() < other._key()

    def __gt__(self, other) -> bool:
        return as_exponent(other) < self

    def __ge__(self, other) -> bool:
        return as_exponent(other) <= self

    def __repr__(self) -> str:
        return f"Exponent({self})"

    def __str__(self) -> str:
        if self._inf:
            return "inf"
        if isinstance(self._value, Fraction):
            return str(self._value)
        return repr(self._value)


INF = Exponent(math.inf)

ExponentLike = Union[Exponent, int, float, Fraction, str]


def as_exponent(value: ExponentLike) -> Exponent:
    return value if isinstance(value, Exponent) else Exponent(value)


def conjugate(e: ExponentLike) -> Exponent:
    """Hölder conjugate: 1/e + 1/result = 1."""
    e = as_exponent(e)
    if e._conj is None:
        e._conj = Exponent.from_reciprocal(1 - e.reciprocal())
    return e._conj


def _require_finite_rho(rho: ExponentLike) -> Exponent:
    rho = as_exponent(rho)
    if rho.is_inf:
        raise PreconditionError("rho must be finite (rho in [1, inf))")
    return rho


def solve_r(p: ExponentLike, rho: ExponentLike) -> Exponent:
    """Solve ``1/p - 1/r = 1 - 1/rho`` for r in [rho, inf].

    Requires p in [1, rho/(rho-1)] (with rho/(rho-1) = inf for rho = 1).
    """
    p = as_exponent(p)
    rho = _require_finite_rho(rho)
    inv_r = p.reciprocal() - 1 + rho.reciprocal()
    if inv_r < 0 and not (isinstance(inv_r, float) and inv_r > -_FLOAT_TOL):
        raise PreconditionError(
            f"p = {p} lies outside [1, rho/(rho-1)] for rho = {rho}"
        )
    return Exponent.from_reciprocal(max(inv_r, 0) if isinstance(inv_r, float) else inv_r)


def solve_r_from_q(q: ExponentLike, rho: ExponentLike) -> Exponent:
    """Solve ``1/q + 1/r = 1/rho`` for r in [rho, inf]; requires q >= rho."""
    q = as_exponent(q)
    rho = _require_finite_rho(rho)
    if q < rho:
        raise PreconditionError(f"q = {q} must satisfy q >= rho = {rho}")
    inv_r = rho.reciprocal() - q.reciprocal()
    if isinstance(inv_r, float):
        inv_r = max(inv_r, 0.0)
    return Exponent.from_reciprocal(inv_r)


def pnorm(coords, s: ExponentLike) -> float:
    """The s-norm of a finite real (or complex, by modulus) vector.

    For s outside {1, 2, inf} the largest modulus is factored out before
    powering, which keeps large s from overflowing.
    """
    s = as_exponent(s)
    a = np.abs(np.asarray(coords)).ravel()
    if a.size == 0:
        return 0.0
    sf = s._f
    if sf == math.inf:
        return float(a.max())
    if sf == 1.0:
        return float(a.sum())
    m = float(a.max())
    if m == 0.0:
        return 0.0
    if sf == 2.0 and 1e-150 < m < 1e150:
        return float(np.sqrt(np.dot(a, a)))
    return m * float(np.sum((a / m) ** sf)) ** (1.0 / sf)


@dataclass(frozen=True)
class PNormedVector:
    """A finite coordinate vector carrying the exponent of its ambient l_s."""

    coords: np.ndarray
    exponent: Exponent

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=float).ravel())
        object.__setattr__(self, "exponent", as_exponent(self.exponent))

    @property
    def dim(self) -> int:
        return self.coords.size

    def norm(self) -> float:
        return pnorm(self.coords, self.exponent)

    def scaled(self, factor: float) -> "PNormedVector":
        return PNormedVector(factor * self.coords, self.exponent)

    def __eq__(self, other):
        if not isinstance(other, PNormedVector):
            return NotImplemented
        return self.exponent == other.exponent and np.array_equal(self.coords, other.coords)

    __hash__ = None


@dataclass(frozen=True)
class DirectSumElement:
    """An element of l_s(X_1, ..., X_n): blocks normed individually, then
    combined by the outer exponent."""

    blocks: tuple
    outer_exponent: Exponent

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "outer_exponent", as_exponent(self.outer_exponent))

    @classmethod
    def from_arrays(cls, arrays, inner: Sequence[ExponentLike], outer: ExponentLike):
        return cls(tuple(PNormedVector(a, e) for a, e in zip(arrays, inner)), outer)

    @property
    def dims(self) -> tuple:
        return tuple(b.dim for b in self.blocks)

    def block_norms(self) -> np.ndarray:
        return np.array([b.norm() for b in self.blocks])

    def norm(self) -> float:
        return pnorm(self.block_norms(), self.outer_exponent)

    def flat(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros(0)
        return np.concatenate([b.coords for b in self.blocks])


def direct_sum_norm(x: DirectSumElement) -> float:
    return x.norm()


def dual_pairing(xstar: DirectSumElement, x: DirectSumElement) -> float:
    """x*(x) = sum_k x*_k(x_k) between l_t(X_1*, ...) and l_s(X_1, ...)."""
    if xstar.dims != x.dims:
        raise ValueError(f"block dimensions differ: {xstar.dims} vs {x.dims}")
    if xstar.outer_exponent != conjugate(x.outer_exponent):
        raise ValueError("outer exponents are not conjugate")
    for bs, b in zip(xstar.blocks, x.blocks):
        if b.dim > 1 and bs.exponent != conjugate(b.exponent):
            raise ValueError("inner exponents are not pairwise conjugate")
    return float(sum(np.dot(bs.coords, b.coords) for bs, b in zip(xstar.blocks, x.blocks)))


def align(z, s: ExponentLike) -> np.ndarray:
    """Unit vector x in l_s with <z, x> = ||z||_t, t the conjugate of s.

    This is the Hölder-equality witness. Ties (s = 1) resolve to the lowest
    index; zero coordinates get sign +1 when s = inf.
    """
    s = as_exponent(s)
    z = np.asarray(z, dtype=float).ravel()
    n = z.size
    x = np.zeros(n)
    if n == 0:
        return x
    sgn = np.where(z < 0, -1.0, 1.0)
    if not np.any(z):
        if s.is_inf:
            return np.ones(n)
        x[0] = 1.0
        return x
    if s == 1:
        j = int(np.argmax(np.abs(z)))
        x[j] = sgn[j]
        return x
    if s.is_inf:
        return sgn
    t = conjugate(s)
    zn = pnorm(z, t)
    x = sgn * (np.abs(z) / zn) ** (float(t) - 1.0)
    # renormalise against rounding so the witness sits on the unit sphere
    return x / pnorm(x, s)


def sign_chunks(n: int, chunk: int = 1 << 15, canonical: bool = True) -> Iterator[np.ndarray]:
    """Yield sign patterns as (n, c) arrays of +-1.

    With ``canonical`` the first sign is fixed to +1 (2**(n-1) patterns).
    Patterns come in lexicographic order with -1 < +1, so the first maximiser
    found is the lexicographically smallest.
    """
    if n == 0:
        yield np.zeros((0, 1))
        return
    free = n - 1 if canonical else n
    total = 1 << free
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        shifts = np.arange(free - 1, -1, -1, dtype=np.int64)
        bits = (idx[None, :] >> shifts[:, None]) & 1
        signs = 2.0 * bits - 1.0
        if canonical:
            signs = np.vstack([np.ones((1, idx.size)), signs])
        yield signs


def row_pnorms(V, s: ExponentLike) -> np.ndarray:
    """s-norms of the rows of a 2-D array."""
    s = as_exponent(s)
    A = np.abs(np.asarray(V))
    if A.shape[1] == 0:
        return np.zeros(A.shape[0])
    if s.is_inf:
        return A.max(axis=1)
    if s == 1:
        return A.sum(axis=1)
    if s == 2:
        return np.sqrt(np.einsum("ij,ij->i", A, A))
    m = A.max(axis=1)
    safe = np.where(m > 0, m, 1.0)
    sf = float(s)
    return m * np.sum((A / safe[:, None]) ** sf, axis=1) ** (1.0 / sf)


def align_rows(Z, s: ExponentLike) -> np.ndarray:
    """Row-wise :func:`align`."""
    s = as_exponent(s)
    Z = np.asarray(Z, dtype=float)
    n, d = Z.shape
    if d == 1:
        return np.where(Z < 0, -1.0, 1.0)
    zero = ~np.any(Z, axis=1)
    sgn = np.where(Z < 0, -1.0, 1.0)
    if s.is_inf:
        return sgn
    if s == 1:
        X = np.zeros_like(Z)
        j = np.argmax(np.abs(Z), axis=1)
        X[np.arange(n), j] = sgn[np.arange(n), j]
        return X
    t = conjugate(s)
    zn = row_pnorms(Z, t)
    zn = np.where(zn > 0, zn, 1.0)
    X = sgn * (np.abs(Z) / zn[:, None]) ** (float(t) - 1.0)
    X[zero] = 0.0
    X[zero, 0] = 1.0
    return X / row_pnorms(X, s)[:, None]
