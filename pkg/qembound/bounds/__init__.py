"""Lower bounds on the sample cost of quantum error mitigation.

The general bounds over state sets and noise ensembles live in
:mod:`qembound.bounds.core`, the depth-dependent bounds for layered
circuits in :mod:`qembound.bounds.layered` and the thermodynamic bounds in
:mod:`qembound.bounds.thermal`. Scalar formulas can be evaluated by
identifier through :func:`evaluate_formula`.
"""

from qembound.bounds.core import (
    AccuracyTarget, MomentTarget, LayeredSpec, StateSet, BoundReport,
    thm1_scalar, thm1_bound, thm3_scalar, thm3_bound, prop2_bound,
)
from qembound.bounds.layered import (
    thm4_bound, thm5_bound, thm6_bound, appendixE_bounds,
)
from qembound.bounds.thermal import (
    free_energy, equilibrium_free_energy, entropy_production_rate,
    alpha_ent_estimate, thermal_sample_bound,
)
from qembound.bounds.formulas import BOUNDS, evaluate_formula
