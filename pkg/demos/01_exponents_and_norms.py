"""
Exponents, p-norms and duality
==============================

Exponents live in [1, inf]. Rational inputs stay exact, so conjugates and
the r-relations come out as fractions rather than rounded floats.
"""

import numpy as np

from divseries.core import (
    INF,
    DirectSumElement,
    align,
    conjugate,
    dual_pairing,
    pnorm,
    solve_r,
    solve_r_from_q,
)


# conjugates: 1/e + 1/e* = 1, with 1/inf = 0
for e in (1, 4, 2, INF):
    print(f"conjugate({e}) = {conjugate(e)}")

# 1/p - 1/r = 1 - 1/rho and 1/q + 1/r = 1/rho
print("solve_r(3, 1)        =", solve_r(3, 1))
print("solve_r(1, 2)        =", solve_r(1, 2))
print("solve_r_from_q(2, 2) =", solve_r_from_q(2, 2))

# norms are monotone in the exponent
v = np.array([3.0, -4.0, 1.0])
for s in (1, 1.5, 2, 4, INF):
    print(f"||v||_{s} = {pnorm(v, s):.6f}")

# the Hölder-equality witness: a unit vector that norms z
z = np.array([1.0, -2.0, 0.5])
x = align(z, 3)
print("<z, align(z, 3)> =", z @ x, " ||z||_{3/2} =", pnorm(z, conjugate(3)))

# direct sums combine block norms with an outer exponent
u = DirectSumElement.from_arrays([(3, 4), (5,)], [2, 1], 2)
w = DirectSumElement.from_arrays([(1, 0), (1,)], [2, INF], 2)
print("||u|| =", u.norm(), " <w, u> =", dual_pairing(w, u))
