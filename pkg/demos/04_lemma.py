"""
The block lower bound
=====================

For summands into a space of M-cotype rho with constant C,
||B|| >= C ||(||A_1||, ..., ||A_n||)||_r with 1/q + 1/r = 1/rho.
The witness is assembled from norming vectors, weights and the
sign pattern found by sign_max.
"""

import numpy as np

from divseries import INF, MatrixOperator
from divseries.lemma import LemmaInstance, verify_lemma_bound

one = MatrixOperator([[1.0]], 2, 2)
ok, rep = verify_lemma_bound(LemmaInstance((one, one), 2, 1.0, INF))
print("two scalars, q = inf:", "pass" if ok else "fail",
      "ratio", rep.achieved_ratio, "bound", rep.bound)

rng = np.random.default_rng(2)
summands = tuple(MatrixOperator(rng.standard_normal((3, 4)), s, 2) for s in (1, 2, 3, INF))
for q in (2, 3, 4, INF):
    ok, rep = verify_lemma_bound(LemmaInstance(summands, 2, 1.0, q))
    print(f"q = {q}: r = {rep.r}, achieved {rep.achieved_ratio:.6f} >= bound {rep.bound:.6f}"
          f" (delta {rep.delta:.1e}): {ok}")
