"""Finite-scale verification of divergence results for series sum ||A_k x||^p.

Modules: ``core`` (exponents, norms, direct sums), ``operators`` (operator
norms with certified lower bounds), ``cotype`` (sign maxima and M-cotype
ratios), ``lemma`` (the block-operator lower bound), ``divergence``
(families, probes, witnesses), ``sharpness`` (the l_r counterexamples).
"""

__version__ = "0.1.0"

from .core import (
    INF,
    DirectSumElement,
    Exponent,
    PNormedVector,
    PreconditionError,
    conjugate,
    dual_pairing,
    pnorm,
    solve_r,
    solve_r_from_q,
)
from .operators import (
    BlockOperator,
    MatrixOperator,
    SearchBudget,
    StackedOperator,
    block_norm,
    operator_norm,
    stacked_norm,
)
