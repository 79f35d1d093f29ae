"""Exact simulation of noisy layered circuits.

A :class:`LayeredCircuit` resolves a
:class:`~qembound.bounds.core.LayeredSpec` into concrete layer unitaries
and a matrix of per-site depolarizing strengths. Layer ``l`` applies the
sandwich channel ``Lambda_l`` (if any), the unitary ``U_l``, the sandwich
channel ``Xi_l`` and then depolarizing noise of strength ``gamma_{l,m}`` to
every qubit ``m``.

Evolution is exact on density matrices; randomness only enters through
the terminal measurement (:func:`sample_measurement`) and the correction
insertions of probabilistic error cancellation.
"""

import functools
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from qembound import channels
from qembound import numkit
from qembound.bounds.core import LayeredSpec
from qembound.channels import KrausChannel
from qembound.numkit import ComplexMatrix, DensityMatrix, InvalidArgument, Observable


MAX_QUBITS: int = 6
STRENGTH_TOL: float = 1e-15


class LayeredCircuit:
    """A layered circuit with resolved unitaries and noise strengths.

    :param spec: The circuit description.
    :param unitaries: ``L`` unitaries of size ``2^M``.
    :param strengths: ``L x M`` matrix of depolarizing strengths, each at
        least ``spec.gamma`` and at most 1.
    """

    def __init__(self,
                 spec: LayeredSpec,
                 unitaries: Sequence[ComplexMatrix],
                 strengths: np.ndarray,
                 ):
        if spec.qubits > MAX_QUBITS:
            raise InvalidArgument('qubit count', spec.qubits,
                                  f'at most {MAX_QUBITS} for exact simulation')
        unitaries = [numkit.as_square(u) for u in unitaries]
        if len(unitaries) != spec.layers:
            raise InvalidArgument('unitary count', len(unitaries),
                                  str(spec.layers))
        for u in unitaries:
            if u.shape[0] != spec.dim:
                raise InvalidArgument('unitary size', u.shape[0], str(spec.dim))
            channels.make_unitary_channel(u)
        strengths = np.array(strengths, dtype=float)
        if strengths.shape != (spec.layers, spec.qubits):
            raise InvalidArgument('noise strength shape', strengths.shape,
                                  str((spec.layers, spec.qubits)))
        if (strengths < spec.gamma - STRENGTH_TOL).any() or (strengths > 1).any():
            raise InvalidArgument('noise strengths', strengths.tolist(),
                                  f'within [{spec.gamma}, 1]')
        self.spec = spec
        self.unitaries = tuple(unitaries)
        self.strengths = strengths
        self.strengths.setflags(write=False)

    @classmethod
    def build(cls,
              spec: LayeredSpec,
              rng: numkit.RandomLike = None,
              strengths: Optional[np.ndarray] = None,
              unitaries: str = 'random',
              ) -> 'LayeredCircuit':
        """Resolve a circuit from its description.

        Unitaries given in the description are used as they are. Otherwise
        they are Haar random, drawn from the description's seed if it has
        one and from ``rng`` if not, or identities if ``unitaries`` is
        ``identity``. Strengths default to ``spec.gamma`` on every site.
        """
        if spec.unitaries is not None:
            resolved = spec.unitaries
        elif unitaries == 'identity':
            resolved = [np.eye(spec.dim, dtype=complex)] * spec.layers
        elif unitaries == 'random':
            rng = numkit.make_rng(spec.seed if spec.seed is not None else rng)
            resolved = [numkit.random_unitary(spec.dim, rng)
                        for i in range(spec.layers)]
        else:
            raise InvalidArgument('unitary kind', unitaries,
                                  'random or identity')
        if strengths is None:
            strengths = np.full((spec.layers, spec.qubits), spec.gamma)
        return cls(spec, resolved, strengths)

    @property
    def qubits(self) -> int:
        return self.spec.qubits

    @property
    def layers(self) -> int:
        return self.spec.layers

    @property
    def dim(self) -> int:
        return self.spec.dim

    @functools.cached_property
    def ideal_unitary(self) -> ComplexMatrix:
        """The product ``U_L ... U_1``."""
        total = np.eye(self.dim, dtype=complex)
        for u in self.unitaries:
            total = u @ total
        return total

    def sandwich_of(self, layer: int) -> Tuple[Optional[KrausChannel],
                                              Optional[KrausChannel]]:
        if self.spec.sandwich is None or self.spec.sandwich[layer] is None:
            return None, None
        before, after = self.spec.sandwich[layer]
        return before, after

    def __repr__(self):
        return (f'<LayeredCircuit M={self.qubits} L={self.layers} '
                f'gamma={self.spec.gamma}>')


@functools.lru_cache(maxsize=None)
def site_pauli(label: str, site: int, qubits: int) -> ComplexMatrix:
    """The Pauli ``label`` acting on qubit ``site`` of a register."""
    return numkit.pauli('I' * site + label + 'I' * (qubits - site - 1))


def _depolarize_site(x: ComplexMatrix,
                     site: int,
                     qubits: int,
                     p: float,
                     ) -> ComplexMatrix:
    # (1 - 3p/4) x + p/4 (X x X + Y x Y + Z x Z) on one qubit
    if p == 0:
        return x
    out = (1 - .75 * p) * x
    for label in 'XYZ':
        op = site_pauli(label, site, qubits)
        out = out + .25 * p * (op @ x @ op)
    return out


def check_input(c: LayeredCircuit, rho_in) -> DensityMatrix:
    rho_in = numkit.check_state(rho_in)
    if rho_in.shape[0] != c.dim:
        raise InvalidArgument('input state dimension', rho_in.shape[0],
                              str(c.dim))
    return rho_in


def _check_scale(scale: float) -> float:
    if not scale >= 1:
        raise InvalidArgument('noise scale factor', scale, 'at least 1')
    return float(scale)


def evolve(c: LayeredCircuit,
           x: ComplexMatrix,
           scale: float = 1.,
           insertions: Optional[np.ndarray] = None,
           ) -> ComplexMatrix:
    """Run the noisy circuit on any operator ``x`` (linear, unvalidated).

    :param scale: Noise strength multiplier; strengths are clamped at 1.
    :param insertions: ``L x M`` integers indexing ``IXYZ``; the Pauli is
        conjugated onto its site right after that site's noise.
    """
    for layer, u in enumerate(c.unitaries):
        before, after = c.sandwich_of(layer)
        if before is not None:
            x = before(x)
        x = u @ x @ u.conj().T
        if after is not None:
            x = after(x)
        for site in range(c.qubits):
            p = min(scale * c.strengths[layer, site], 1.)
            x = _depolarize_site(x, site, c.qubits, p)
            if insertions is not None and insertions[layer, site]:
                op = site_pauli('IXYZ'[insertions[layer, site]],
                                site, c.qubits)
                x = op @ x @ op
    return x


def ideal_state(c: LayeredCircuit, rho_in: DensityMatrix) -> DensityMatrix:
    rho_in = check_input(c, rho_in)
    u = c.ideal_unitary
    return u @ rho_in @ u.conj().T


def ideal_expectation(c: LayeredCircuit,
                      rho_in: DensityMatrix,
                      a: Observable,
                      ) -> float:
    """``Tr[A U_L ... U_1 rho U_1^dagger ... U_L^dagger]``."""
    a = numkit.check_observable(a)
    if a.shape[0] != c.dim:
        raise InvalidArgument('observable dimension', a.shape[0], str(c.dim))
    return float(np.trace(a @ ideal_state(c, rho_in)).real)


def noisy_state(c: LayeredCircuit,
                rho_in: DensityMatrix,
                scale: float = 1.,
                ) -> DensityMatrix:
    """The exact output state of the noisy circuit.

    :param scale: Multiplier of every noise strength (clamped at 1), at
        least 1; 1 gives the native circuit.
    """
    return evolve(c, check_input(c, rho_in), _check_scale(scale))


def noisy_expectation(c: LayeredCircuit,
                      rho_in: DensityMatrix,
                      a: Observable,
                      scale: float = 1.,
                      ) -> float:
    a = numkit.check_observable(a)
    return float(np.trace(a @ noisy_state(c, rho_in, scale)).real)


def effective_channel(c: LayeredCircuit, scale: float = 1.) -> KrausChannel:
    """The effective noise channel ``F o U^dagger``.

    Maps the ideal output state of any input to the noisy output state.
    Built column by column from the evolution of ``U^dagger |i><j| U``.
    """
    scale = _check_scale(scale)
    d = c.dim
    u = c.ideal_unitary
    superop = np.empty((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1
            pulled = u.conj().T @ unit @ u
            superop[:, i * d + j] = evolve(c, pulled, scale).ravel()
    return KrausChannel.from_superoperator(superop)


def outcome_distribution(rho: DensityMatrix,
                         a: Observable,
                         ) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of ``A`` and their Born probabilities in ``rho``."""
    values, vectors = numkit.eig_hermitian(a)
    probs = np.einsum('ij,ik,kj->j', vectors.conj(), rho, vectors).real
    probs = np.clip(probs, 0, None)
    return values, probs / probs.sum()


def sample_measurement(rho: DensityMatrix,
                       a: Observable,
                       shots: int,
                       rng: numkit.RandomLike = None,
                       ) -> np.ndarray:
    """Draw ``shots`` i.i.d. outcomes of measuring ``A`` on ``rho``."""
    if shots < 1:
        raise InvalidArgument('shot count', shots, 'positive')
    rho = numkit.check_state(rho)
    a = numkit.check_observable(a)
    if a.shape != rho.shape:
        raise InvalidArgument('observable dimension', a.shape[0],
                              str(rho.shape[0]))
    values, probs = outcome_distribution(rho, a)
    return numkit.make_rng(rng).choice(values, size=shots, p=probs)


def pec_one_norm_total(c: LayeredCircuit,
                       assumed: Union[None, float, np.ndarray] = None,
                       ) -> float:
    """The product of single-site one-norms ``(2 + g) / (2 (1 - g))``.

    :param assumed: Strengths to invert; the circuit's own if not given.
    """
    gammas = c.strengths if assumed is None else np.broadcast_to(
        np.asarray(assumed, dtype=float), c.strengths.shape
    )
    return float(np.prod((2 + gammas) / (2 * (1 - gammas))))
