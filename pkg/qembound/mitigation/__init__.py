"""Simulated error mitigation and empirical sample requirements.

Layered circuits under local depolarizing noise are simulated exactly in
:mod:`qembound.mitigation.circuit`. The mitigation protocols (plain
sampling, probabilistic error cancellation and zero noise extrapolation)
are in :mod:`qembound.mitigation.protocols`; the Monte Carlo harness that
measures their bias, spread and sample requirement is in
:mod:`qembound.mitigation.harness`. :func:`layered_scan` puts it all
together against the depth-dependent sampling bounds.
"""

from qembound.mitigation.circuit import (
    LayeredCircuit, ideal_expectation, noisy_state, effective_channel,
    sample_measurement, pec_one_norm_total,
)
from qembound.mitigation.protocols import (
    ProtocolSpec, PECDecomposition, Noninvertible, FitDegenerate,
    pec_decomposition, run_pec, run_zne, run_direct, extrapolate, ZNE_FITS,
)
from qembound.mitigation.harness import (
    EstimatorStats, SampleRequirement, Unachievable,
    estimator_stats, empirical_sample_requirement,
)
from qembound.mitigation.scan import layered_scan
