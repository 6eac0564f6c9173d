"""
Operator norms between l_p spaces
=================================

Exact formulas where they exist; multi-start power ascent otherwise.
Every estimate carries a witness whose ratio is the certified lower bound.
"""

import numpy as np

from divseries import INF, MatrixOperator, operator_norm
from divseries.operators import BlockOperator, StackedOperator, block_norm, stacked_norm

rng = np.random.default_rng(0)
M = rng.standard_normal((4, 5))

for s, t in [(1, 2), (2, 2), (INF, 1), (3, 1.5)]:
    A = MatrixOperator(M, s, t)
    est = operator_norm(A)
    adj = operator_norm(A.adjoint())
    print(f"l_{s} -> l_{t}: {est.estimate:.10f} [{est.method}]"
          f"   adjoint: {adj.estimate:.10f} [{adj.method}]")

# the witness really attains the certified value
A = MatrixOperator(M, 3, 1.5)
est = operator_norm(A)
print("witness ratio:", A.ratio(est.witness), "certified:", est.certified_lower)

# B(x_1, x_2) = A_1 x_1 + A_2 x_2 on l_q(X_1, X_2)
one = MatrixOperator([[1.0]], 2, 2)
print("||B|| on l_inf:", block_norm(BlockOperator((one, one), INF)).estimate)
print("||B|| on l_2  :", block_norm(BlockOperator((one, one), 2)).estimate)

# B_n x = (A_1 x, ..., A_n x) into l_p
stages = tuple(MatrixOperator(rng.standard_normal((2, 3)), 2, 2) for _ in range(4))
est = stacked_norm(StackedOperator(stages, 1))
print("||B_n|| into l_1:", est.certified_lower, f"[{est.method}]")
