"""Qembound - sample cost lower bounds for quantum error mitigation.

Error mitigation recovers noiseless expectation values from noisy quantum
devices by running more circuits, and qembound quantifies how many more.
Its parts:

-   Numerical kernel (:mod:`qembound.numkit`): density matrices, Paulis,
    matrix functions and per-index random generators.
-   Noise models (:mod:`qembound.channels`): Kraus channels, noise
    ensembles, depolarizing and Pauli channels and thermalizing
    Lindbladian semigroups.
-   Distinguishability (:mod:`qembound.divergences`): trace distance,
    fidelity, relative entropies and observable-restricted distances.
-   Contraction (:mod:`qembound.contraction`): searched and analytic
    contraction coefficients and their numerical verification.
-   Bounds (:mod:`qembound.bounds`): the sampling lower bounds themselves,
    general, depth-dependent and thermodynamic.
-   Mitigation (:mod:`qembound.mitigation`): exact simulation of layered
    noisy circuits with probabilistic error cancellation and zero noise
    extrapolation, and measurement of their empirical sample cost.

The command line interface is in :mod:`qembound.cli`.
"""

from qembound.persist import simple_serialization    # noqa: F401

__version__ = '0.1.0'
