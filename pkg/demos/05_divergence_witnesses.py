"""
Divergence witnesses
====================

When (||A_k||) is not in l_r, some x has sum ||A_k x||^p = inf. At desk
scale the builders return a unit x0 whose partial sums pass a target, and
they refuse families whose norms look summable.
"""

import numpy as np

from divseries.core import PreconditionError
from divseries.divergence import (
    OperatorFamily,
    WeightSpec,
    build_divergence_witness_T1,
    build_divergence_witness_T2,
    hypothesis_probe,
    perturbation_density_check,
)

ones = OperatorFamily("diagonal", WeightSpec("constant"), k_max=100_000)
print("probe a_k = 1, r = 2:", hypothesis_probe(ones, 2).verdict)

x0, rep = build_divergence_witness_T1(ones, 1, 2, target=100.0)
print("T1: ||x0|| =", np.linalg.norm(x0), "block end", rep.notes["block_end"])
for N, S in rep.table():
    print(f"   S_{N} = {S:.3f}")

geometric = OperatorFamily("diagonal", WeightSpec("geometric", {"ratio": 0.5}))
try:
    build_divergence_witness_T1(geometric, 1, 2)
except PreconditionError as exc:
    print("refused:", exc)

log = OperatorFamily("diagonal", WeightSpec("log"), k_max=100_000)
x0, plan, rep = build_divergence_witness_T2(log, 2, 2, targets=(1, 2, 3))
print("T2 block ends", plan.ends, "p_n", [str(p) for p in plan.p_schedule])
print("   achieved", [round(a, 3) for a in rep.achieved], "targets", rep.targets)

# perturbing any x by lambda x0 keeps the growth for all but at most one lambda
probes = [np.random.default_rng(3).standard_normal(100_000) / np.arange(1, 100_001)]
dens = perturbation_density_check(log, 1.5, x0, probes, [-1.0, -0.1, 0.1, 1.0])
print("stagnant lambdas per probe:", dens.stagnant_counts)
