"""
Sharpness examples
==================

With (a_k) in l_r the orbits stay in l_p: every partial sum sits under
a Hölder ceiling. Example 3 runs on the dyadic grid, where the Rademacher
functions are exactly orthonormal.
"""

import numpy as np

from divseries.divergence import WeightSpec
from divseries.sharpness import example1_check, example2_check, example3_check, gram_matrix

geometric = WeightSpec("geometric", {"ratio": 0.5})
harmonic = WeightSpec("power", {"alpha": 1.0})

rep = example1_check(geometric, 1, xs=[1.0])
print("example 1: S_N ->", rep.rows[-1]["S_N"], "passed:", rep.passed)

rep = example2_check(2, 1, geometric, n_samples=20)
print("example 2: largest S_N / ceiling =", rep.max_ratio, "passed:", rep.passed)

print("Gram matrix K = 3:\n", gram_matrix(3))
rep = example3_check(2, 1, harmonic, K=12, n_samples=20)
print("example 3: norm error", rep.max_norm_error, "Bessel", rep.extra["bessel_ok"],
      "largest ratio", round(rep.max_ratio, 6), "passed:", rep.passed)
