"""
Sign maxima and M-cotype ratios
===============================

max over signs of ||sum eps_k v_k|| is enumerated exactly (half the
patterns, by symmetry). In a Hilbert space its square dominates the sum of
squared norms, and orthonormal tuples give ratio exactly 1.
"""

import numpy as np

from divseries.cotype import (
    cotype_ratio,
    estimate_cotype_constant,
    rademacher_average,
    sign_max,
    unit_modulus_max_sampled,
)

rng = np.random.default_rng(1)
V = rng.standard_normal((6, 4))
value, eps = sign_max(V, 2)
print("sign max:", value, "signs:", eps.signs)
print("sign max^2 - sum ||v_k||^2 =", value ** 2 - np.sum(V ** 2))
print("Rademacher average:", rademacher_average(V, 2))

Q = np.linalg.qr(rng.standard_normal((5, 5)))[0][:3]
print("orthonormal ratio (rho = 2):", cotype_ratio(Q, 2, 2))

# complex coefficients of modulus one gain at most a factor 2 over signs
Z = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
print("unit modulus / sign max:", unit_modulus_max_sampled(Z, 2) / sign_max(Z, 2)[0])

# witnessed upper bounds on the constant for l_s^d
for s in (2, 4):
    est = estimate_cotype_constant(3, s, 2, n_max=4, trials=16)
    print(f"l_{s}^3, rho = 2: constant <= {est.constant_upper:.6f}"
          f" (analytic lower: {est.analytic_lower})")
