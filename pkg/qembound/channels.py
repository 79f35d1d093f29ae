"""Quantum channels in Kraus and superoperator form.

A channel is stored as a tuple of Kraus operators. Its superoperator, the
``d^2 x d^2`` matrix acting on row-major vectorized density matrices
(``vec(K rho K^dagger) = (K kron conj(K)) vec(rho)``), is computed lazily
and cached. Channels composed over many layers should be chained through
:func:`chain`, which multiplies superoperators and converts back to a
minimal Kraus set through the Choi matrix, so that the Kraus count never
exceeds ``d^2``.

The Choi matrix follows the convention ``J = sum_ij E(|i><j|) kron |i><j|``
(the channel acts on the first tensor factor).

Tensor factors are big-endian: the first factor is the most significant
qubit.

Generators of Markovian semigroups (Liouvillians) are represented by
:class:`LiouvillianSpec`, which checks trace annihilation and the declared
Gibbs fixed point on construction. :func:`semigroup_step` exponentiates a
generator into a channel.

Channels can be created from their JSON configuration form through
:func:`from_spec`, which dispatches on the ``type`` key to the builders
registered in :data:`CHANNELS`.
"""

import math
import functools
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from qembound import numkit
from qembound import persist
from qembound import registry
from qembound.numkit import (
    ComplexMatrix, DensityMatrix, InvalidArgument, InvalidMatrix, QEMError,
)


logger = logging.getLogger(__name__)

TP_TOL: float = 1e-9
CP_TOL: float = 1e-9
UNITARY_TOL: float = 1e-8
UNITAL_TOL: float = 1e-9
SEMIGROUP_CP_TOL: float = 1e-7
CHOI_CUTOFF: float = 1e-12
TRACE_ANNIHILATION_TOL: float = 1e-9
GIBBS_FIXED_TOL: float = 1e-8


class NotTracePreserving(QEMError, ValueError):
    """Kraus operators whose ``sum K^dagger K`` deviates from the identity
    by more than ``TP_TOL``; ``residual`` is the largest deviating entry."""

    def __init__(self, residual: float):
        super().__init__(
            f'Kraus operators not trace preserving, residual {residual:.3e}'
        )
        self.residual = residual


class NotCompletelyPositive(QEMError, ValueError):
    """The Choi matrix of a map has a significantly negative eigenvalue."""

    def __init__(self, min_eigenvalue: float):
        super().__init__(
            'map not completely positive: minimum Choi eigenvalue '
            f'{min_eigenvalue:.3e}'
        )
        self.min_eigenvalue = min_eigenvalue


class NotAFixedPoint(QEMError, ValueError):
    """A declared fixed point of a map or generator is not fixed."""

    def __init__(self, residual: float):
        super().__init__(f'declared fixed point moves by {residual:.3e}')
        self.residual = residual


class KrausMap:
    """A completely positive linear map in Kraus form.

    No trace preservation is required; see :class:`KrausChannel` for
    channels proper. Instances are immutable.

    :param kraus: Kraus operators, square matrices of equal size.
    """
    serialize_params = ['kraus']

    def __init__(self, kraus: Sequence[ComplexMatrix]):
        ops = [numkit.as_square(k) for k in kraus]
        if not ops:
            raise InvalidArgument('Kraus set', kraus, 'nonempty')
        dims = {op.shape[0] for op in ops}
        if len(dims) != 1:
            raise InvalidMatrix(f'Kraus operators of mixed sizes {dims}')
        for op in ops:
            op.setflags(write=False)
        self.kraus = tuple(ops)
        self.dim = ops[0].shape[0]
        self._superop = None

    @classmethod
    def from_superoperator(cls, superop: ComplexMatrix, **kwargs) -> 'KrausMap':
        """Convert a superoperator to a minimal Kraus set.

        Choi eigenvalues below ``CHOI_CUTOFF`` times the largest one are
        discarded.
        """
        superop = numkit.as_square(superop)
        dim = _superop_dim(superop)
        values, vectors = numkit.eig_hermitian(_choi_from_superop(superop))
        keep = values > CHOI_CUTOFF * max(values[-1], 0.)
        if not keep.any():
            kraus = [np.zeros((dim, dim), dtype=complex)]
        else:
            kraus = [
                math.sqrt(value) * vectors[:, i].reshape(dim, dim)
                for i, value in zip(np.flatnonzero(keep), values[keep])
            ]
        new = cls(kraus, **kwargs)
        new._superop = superop.copy()
        new._superop.setflags(write=False)
        return new

    @property
    def superop(self) -> ComplexMatrix:
        if self._superop is None:
            superop = sum(np.kron(k, k.conj()) for k in self.kraus)
            superop.setflags(write=False)
            self._superop = superop
        return self._superop

    def __call__(self, rho: ComplexMatrix) -> ComplexMatrix:
        rho = numkit.as_square(rho)
        if rho.shape[0] != self.dim:
            raise InvalidArgument('input dimension', rho.shape[0],
                                  f'{self.dim} to match the channel')
        if len(self.kraus) > self.dim ** 2 or self._superop is not None:
            return (self.superop @ rho.reshape(-1)).reshape(self.dim, self.dim)
        stack = np.array(self.kraus)
        return np.einsum('kij,jl,kml->im', stack, rho, stack.conj())

    def tp_residual(self) -> float:
        """Maximum entry of ``sum K^dagger K - I``."""
        total = sum(k.conj().T @ k for k in self.kraus)
        return float(np.max(np.abs(total - np.eye(self.dim))))

    def __repr__(self):
        return (f'<{self.__class__.__name__} dim={self.dim} '
                f'kraus={len(self.kraus)}>')


class KrausChannel(KrausMap):
    """A completely positive trace-preserving map in Kraus form.

    :param kraus: Kraus operators; ``sum K^dagger K`` must equal the
        identity within ``tol``.
    :param tol: Trace preservation tolerance.
    :raises NotTracePreserving: If the Kraus set is not trace preserving.
    """

    def __init__(self, kraus: Sequence[ComplexMatrix], tol: float = TP_TOL):
        super().__init__(kraus)
        residual = self.tp_residual()
        if residual > tol:
            raise NotTracePreserving(residual)


persist.simple_serialization(KrausMap)


class NoiseEnsemble:
    """A finite set of channels of equal dimension, applied one per sample.

    :param channels: Nonempty sequence of channels.
    """

    def __init__(self, channels: Sequence[KrausChannel]):
        channels = tuple(channels)
        if not channels:
            raise InvalidArgument('noise ensemble', channels, 'nonempty')
        for channel in channels:
            if not isinstance(channel, KrausMap):
                raise InvalidArgument('ensemble member', channel,
                                      'a KrausChannel')
        dims = {channel.dim for channel in channels}
        if len(dims) != 1:
            raise InvalidArgument('ensemble dimensions', dims, 'all equal')
        self.channels = channels
        self.dim = dims.pop()

    @classmethod
    def of(cls, channels: Any) -> 'NoiseEnsemble':
        if isinstance(channels, cls):
            return channels
        elif isinstance(channels, KrausMap):
            return cls([channels])
        else:
            return cls(channels)

    def __iter__(self):
        return iter(self.channels)

    def __len__(self):
        return len(self.channels)

    def __getitem__(self, index: int) -> KrausChannel:
        return self.channels[index]


persist.simple_serialization(NoiseEnsemble)


def _superop_dim(superop: ComplexMatrix) -> int:
    dim = int(round(math.sqrt(superop.shape[0])))
    if dim * dim != superop.shape[0]:
        raise InvalidMatrix('superoperator size not a square', superop.shape)
    return dim


def _choi_from_superop(superop: ComplexMatrix) -> ComplexMatrix:
    # S[(a,b),(i,j)] -> J[(a,i),(b,j)], an involution
    dim = _superop_dim(superop)
    return superop.reshape(dim, dim, dim, dim).transpose(0, 2, 1, 3).reshape(
        dim * dim, dim * dim
    )


def _check_probability(name: str, value: float) -> float:
    if not 0 <= value <= 1:
        raise InvalidArgument(name, value, 'a probability in [0, 1]')
    return float(value)


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel([np.eye(dim, dtype=complex)])


def make_depolarizing(p: float) -> KrausChannel:
    """Single-qubit depolarizing channel ``(1 - p) id + p I/2``."""
    p = _check_probability('depolarizing strength', p)
    return KrausChannel(
        [math.sqrt(1 - 3 * p / 4) * numkit.PAULI_MATRICES['I']] + [
            math.sqrt(p / 4) * numkit.PAULI_MATRICES[char] for char in 'XYZ'
        ]
    )


def make_stochastic_pauli(qx: float, qy: float, qz: float) -> KrausChannel:
    """Single-qubit stochastic Pauli channel applying X, Y, Z with the
    given probabilities."""
    probs = [_check_probability(f'Pauli probability q{char}', q)
             for char, q in zip('xyz', (qx, qy, qz))]
    q_identity = 1 - sum(probs)
    if q_identity < -1e-12:
        raise InvalidArgument('Pauli probabilities', (qx, qy, qz),
                              'to sum to at most 1')
    q_identity = max(q_identity, 0.)
    return KrausChannel(
        [math.sqrt(q_identity) * numkit.PAULI_MATRICES['I']] + [
            math.sqrt(q) * numkit.PAULI_MATRICES[char]
            for char, q in zip('XYZ', probs)
        ]
    )


def make_global_depolarizing(gamma: float,
                             fixed: DensityMatrix,
                             ) -> KrausChannel:
    """The channel ``(1 - gamma) tau + gamma Tr(tau) sigma``.

    The replacement part uses the Kraus operators
    ``sqrt(gamma lambda_i) |e_i><j|`` over the eigenpairs of ``sigma``.

    :raises InvalidArgument: If the fixed point is not full rank.
    """
    gamma = _check_probability('global depolarizing strength', gamma)
    fixed = numkit.check_state(fixed)
    values, vectors = numkit.eig_hermitian(fixed)
    if values[0] <= 0:
        raise InvalidArgument('fixed point', 'rank deficient state',
                              'a full-rank state')
    dim = fixed.shape[0]
    kraus = [math.sqrt(1 - gamma) * np.eye(dim, dtype=complex)]
    for value, vector in zip(values, vectors.T):
        for j in range(dim):
            op = np.zeros((dim, dim), dtype=complex)
            op[:, j] = vector
            kraus.append(math.sqrt(gamma * value) * op)
    return KrausChannel(kraus)


def make_amplitude_damping(p: float) -> KrausChannel:
    """Single-qubit amplitude damping toward ``|0>`` with decay probability
    ``p``."""
    p = _check_probability('damping probability', p)
    return KrausChannel([
        np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=complex),
        np.array([[0, math.sqrt(p)], [0, 0]], dtype=complex),
    ])


def make_unitary_channel(u: ComplexMatrix) -> KrausChannel:
    """Conjugation by a unitary matrix.

    :raises InvalidArgument: If ``u^dagger u`` differs from the identity by
        more than ``UNITARY_TOL``.
    """
    u = numkit.as_square(u)
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > UNITARY_TOL:
        raise InvalidArgument('unitary', 'non-unitary matrix',
                              'u^dagger u = I')
    return KrausChannel([u])


def _same_dim(a: KrausMap, b: KrausMap) -> None:
    if a.dim != b.dim:
        raise InvalidArgument('channel dimensions', (a.dim, b.dim), 'equal')


def _result_class(*maps: KrausMap) -> type:
    return (
        KrausChannel if all(isinstance(m, KrausChannel) for m in maps)
        else KrausMap
    )


def compose(second: KrausMap, first: KrausMap) -> KrausMap:
    """The map applying ``first`` then ``second``.

    The Kraus set consists of all pairwise products; no truncation is
    performed. Use :func:`chain` for long sequences.
    """
    _same_dim(second, first)
    return _result_class(second, first)(
        [k2 @ k1 for k2 in second.kraus for k1 in first.kraus]
    )


def chain(maps: Sequence[KrausMap]) -> KrausMap:
    """Compose maps in application order (first element applied first)
    through their superoperators, returning a minimal Kraus form."""
    if not maps:
        raise InvalidArgument('map chain', maps, 'nonempty')
    for m in maps[1:]:
        _same_dim(maps[0], m)
    superop = functools.reduce(
        lambda acc, m: m.superop @ acc, maps[1:], maps[0].superop
    )
    return _result_class(*maps).from_superoperator(superop)


def tensor_channels(*maps: KrausMap) -> KrausMap:
    """Tensor product of maps, first operand most significant."""
    if not maps:
        raise InvalidArgument('operand count', 0, 'at least one map')
    kraus = [np.eye(1, dtype=complex)]
    for m in maps:
        kraus = [np.kron(k_acc, k) for k_acc in kraus for k in m.kraus]
    return _result_class(*maps)(kraus)


def apply(e: KrausMap, rho: ComplexMatrix) -> ComplexMatrix:
    """Apply a map to a matrix: ``sum K rho K^dagger``."""
    return e(rho)


def adjoint(e: KrausMap) -> KrausMap:
    """The dual map with Kraus operators ``K^dagger``.

    The result is a :class:`KrausChannel` exactly when the input is unital
    (within trace preservation tolerance).
    """
    kraus = [k.conj().T for k in e.kraus]
    try:
        return KrausChannel(kraus)
    except NotTracePreserving:
        return KrausMap(kraus)


def superoperator(e: KrausMap) -> ComplexMatrix:
    return e.superop


def choi(e: KrausMap) -> ComplexMatrix:
    """The Choi matrix ``sum_ij E(|i><j|) kron |i><j|``."""
    if e._superop is not None:
        return _choi_from_superop(e.superop)
    vecs = np.array([k.reshape(-1) for k in e.kraus])
    return vecs.T @ vecs.conj()


class CPTPReport:
    """Outcome of a complete positivity and trace preservation check."""

    def __init__(self, min_choi_eigenvalue: float, tp_residual: float):
        self.min_choi_eigenvalue = min_choi_eigenvalue
        self.tp_residual = tp_residual

    @property
    def ok(self) -> bool:
        return self.min_choi_eigenvalue >= -CP_TOL and self.tp_residual <= TP_TOL

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return (f'<CPTPReport min_choi_eigenvalue={self.min_choi_eigenvalue:.3e}'
                f' tp_residual={self.tp_residual:.3e} ok={self.ok}>')


def is_cptp(e: KrausMap) -> CPTPReport:
    if e._superop is not None:
        dim = e.dim
        traced = e.superop.reshape(dim, dim, dim * dim)[
            np.arange(dim), np.arange(dim)
        ].sum(axis=0)
        tp_residual = float(np.max(np.abs(
            traced - np.eye(dim).reshape(-1)
        )))
    else:
        tp_residual = e.tp_residual()
    return CPTPReport(numkit.min_eigenvalue(choi(e)), tp_residual)


def is_unital(e: KrausMap) -> bool:
    mixed = numkit.maximally_mixed(e.dim)
    return numkit.trace_norm(e(mixed) - mixed) <= UNITAL_TOL


def fixed_point_residual(e: KrausMap, sigma: DensityMatrix) -> float:
    """Trace distance scale residual ``||E(sigma) - sigma||_1``."""
    sigma = numkit.as_square(sigma)
    return numkit.trace_norm(e(sigma) - sigma)


def pauli_transfer_matrix(e: KrausMap) -> np.ndarray:
    """The real matrix ``R_ij = Tr(P_i E(P_j)) / d`` over the Pauli basis."""
    basis = numkit.pauli_basis(numkit.n_qubits_of(e.dim))
    outputs = [e(p) for p in basis]
    return np.array([
        [np.trace(p_i @ out).real / e.dim for out in outputs]
        for p_i in basis
    ])


def random_channel(dim: int,
                   n_kraus: int = 2,
                   rng: numkit.RandomLike = None,
                   ) -> KrausChannel:
    """A random channel from a Haar-random Stinespring isometry."""
    if n_kraus < 1:
        raise InvalidArgument('Kraus count', n_kraus, 'at least 1')
    isometry = numkit.random_unitary(dim * n_kraus, rng)[:, :dim]
    return KrausChannel([
        isometry[i * dim:(i + 1) * dim, :] for i in range(n_kraus)
    ])


def random_unital_channel(dim: int,
                          n_terms: int = 3,
                          rng: numkit.RandomLike = None,
                          ) -> KrausChannel:
    """A random mixture of Haar-random unitary conjugations."""
    rng = numkit.make_rng(rng)
    weights = rng.dirichlet(np.ones(n_terms))
    return KrausChannel([
        math.sqrt(weight) * numkit.random_unitary(dim, rng)
        for weight in weights
    ])


class LiouvillianSpec:
    """A generator of a Markovian semigroup with a declared Gibbs state.

    :param superop: The ``d^2 x d^2`` generator in the row-major
        vectorization convention of this module.
    :param hamiltonian: The Hamiltonian defining the Gibbs state.
    :param beta: Inverse temperature.
    :raises InvalidArgument: If the generator does not annihilate traces
        or the inverse temperature is not positive.
    :raises NotAFixedPoint: If the Gibbs state is not stationary.
    """

    def __init__(self,
                 superop: ComplexMatrix,
                 hamiltonian: ComplexMatrix,
                 beta: float,
                 ):
        self.superop = numkit.as_square(superop)
        self.superop.setflags(write=False)
        self.dim = _superop_dim(self.superop)
        self.hamiltonian = numkit.check_observable(hamiltonian)
        if self.hamiltonian.shape[0] != self.dim:
            raise InvalidArgument('Hamiltonian dimension',
                                  self.hamiltonian.shape[0], str(self.dim))
        if not beta > 0:
            raise InvalidArgument('inverse temperature', beta, 'positive')
        self.beta = float(beta)
        dim = self.dim
        trace_row = self.superop.reshape(dim, dim, dim * dim)[
            np.arange(dim), np.arange(dim)
        ].sum(axis=0)
        trace_residual = float(np.max(np.abs(trace_row)))
        if trace_residual > TRACE_ANNIHILATION_TOL:
            raise InvalidArgument('generator', f'trace residual {trace_residual:.3e}',
                                  'a trace-annihilating superoperator')
        fixed_residual = float(np.max(np.abs(
            self.superop @ self.gibbs.reshape(-1)
        )))
        if fixed_residual > GIBBS_FIXED_TOL:
            raise NotAFixedPoint(fixed_residual)

    @functools.cached_property
    def gibbs(self) -> DensityMatrix:
        return numkit.gibbs_state(self.hamiltonian, self.beta)

    def __call__(self, tau: ComplexMatrix) -> ComplexMatrix:
        tau = numkit.as_square(tau)
        return (self.superop @ tau.reshape(-1)).reshape(self.dim, self.dim)


persist.simple_serialization(LiouvillianSpec)


def _commutator_superop(h: ComplexMatrix) -> ComplexMatrix:
    eye = np.eye(h.shape[0])
    return -1j * (np.kron(h, eye) - np.kron(eye, h.T))


def _dissipator_superop(jump: ComplexMatrix) -> ComplexMatrix:
    eye = np.eye(jump.shape[0])
    jj = jump.conj().T @ jump
    return (
        np.kron(jump, jump.conj())
        - .5 * np.kron(jj, eye)
        - .5 * np.kron(eye, jj.T)
    )


def gkls_generator(hamiltonian: ComplexMatrix,
                   jumps: Sequence[ComplexMatrix],
                   beta: float,
                   ) -> LiouvillianSpec:
    """The generator ``-i[H, .] + sum_k (J rho J^dagger - {J^dagger J, rho}/2)``.

    :param beta: Inverse temperature of the declared Gibbs fixed point of
        ``hamiltonian``.
    """
    h = numkit.check_observable(hamiltonian)
    superop = _commutator_superop(h)
    for jump in jumps:
        superop = superop + _dissipator_superop(numkit.as_square(jump))
    return LiouvillianSpec(superop, h, beta)


def thermal_generator(hamiltonian: ComplexMatrix,
                      beta: float,
                      rate: float = 1.,
                      ) -> LiouvillianSpec:
    """A detailed-balance thermalizing generator.

    For every pair of energy levels ``i < j`` (ascending energies) there is
    a downward jump ``|i><j|`` at ``rate`` and an upward jump ``|j><i|`` at
    ``rate * exp(-beta (E_j - E_i))``, plus the Hamiltonian part.
    """
    if not rate > 0:
        raise InvalidArgument('thermalization rate', rate, 'positive')
    values, vectors = numkit.eig_hermitian(hamiltonian)
    jumps = []
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            lower = np.outer(vectors[:, i], vectors[:, j].conj())
            gap = values[j] - values[i]
            jumps.append(math.sqrt(rate) * lower)
            jumps.append(math.sqrt(rate * math.exp(-beta * gap)) * lower.conj().T)
    return gkls_generator(hamiltonian, jumps, beta)


def pauli_generator(q: Sequence[float]) -> LiouvillianSpec:
    """The qubit generator ``sum_i q_i P_i tau P_i - tau`` over
    ``(I, X, Y, Z)`` with probabilities ``q``; fixed point ``I/2``."""
    q = [float(value) for value in q]
    if len(q) != 4 or min(q) < 0 or abs(sum(q) - 1) > 1e-9:
        raise InvalidArgument('Pauli generator weights', q,
                              'four probabilities summing to 1')
    superop = -np.eye(4, dtype=complex)
    for weight, char in zip(q, 'IXYZ'):
        p = numkit.PAULI_MATRICES[char]
        superop = superop + weight * np.kron(p, p.conj())
    return LiouvillianSpec(superop, np.zeros((2, 2)), beta=1.)


def semigroup_step(l: LiouvillianSpec, t: float) -> KrausChannel:
    """The channel ``exp(t L)``.

    :raises InvalidArgument: If ``t`` is negative.
    :raises NotCompletelyPositive: If the exponential is not completely
        positive within ``SEMIGROUP_CP_TOL``.
    """
    if not t >= 0:
        raise InvalidArgument('time', t, 'nonnegative')
    superop = numkit.expm(t * l.superop)
    min_eig = numkit.min_eigenvalue(_choi_from_superop(superop))
    if min_eig < -SEMIGROUP_CP_TOL:
        raise NotCompletelyPositive(min_eig)
    logger.debug('semigroup step t=%g, min Choi eigenvalue %.3e', t, min_eig)
    return KrausChannel.from_superoperator(superop)


CHANNELS: Dict[str, Callable[[Dict[str, Any]], KrausChannel]] = {}
GENERATORS: Dict[str, Callable[..., LiouvillianSpec]] = {}
channel_kind, get, construct = registry.register_functions(
    CHANNELS, 'channel type', Callable[[Dict[str, Any]], KrausChannel]
)
generator_kind, get_generator, construct_generator = (
    registry.register_functions(
        GENERATORS, 'generator kind', Callable[..., LiouvillianSpec]
    )
)


def _spec_value(spec: Dict[str, Any], key: str) -> Any:
    try:
        return spec[key]
    except KeyError:
        raise InvalidArgument('channel spec', spec, f'a {key!r} key')


@channel_kind(key='depolarizing')
def _depolarizing_from_spec(spec: Dict[str, Any]) -> KrausChannel:
    channel = make_depolarizing(_spec_value(spec, 'p'))
    n_qubits = spec.get('qubits', 1)
    return channel if n_qubits == 1 else tensor_channels(*[channel] * n_qubits)


@channel_kind(key='pauli')
def _pauli_from_spec(spec: Dict[str, Any]) -> KrausChannel:
    return make_stochastic_pauli(*_spec_value(spec, 'q'))


@channel_kind(key='amplitude_damping')
def _amplitude_damping_from_spec(spec: Dict[str, Any]) -> KrausChannel:
    return make_amplitude_damping(_spec_value(spec, 'p'))


@channel_kind(key='global_depolarizing')
def _global_depolarizing_from_spec(spec: Dict[str, Any]) -> KrausChannel:
    fixed = _spec_value(spec, 'fixed')
    if fixed == 'gibbs':
        fixed = numkit.gibbs_state(
            persist.matrix_from_json(_spec_value(spec, 'hamiltonian')),
            _spec_value(spec, 'beta'),
        )
    else:
        fixed = persist.matrix_from_json(fixed)
    return make_global_depolarizing(_spec_value(spec, 'gamma'), fixed)


@channel_kind(key='unitary')
def _unitary_from_spec(spec: Dict[str, Any]) -> KrausChannel:
    return make_unitary_channel(
        persist.matrix_from_json(_spec_value(spec, 'matrix'))
    )


@channel_kind(key='thermal')
def _thermal_from_spec(spec: Dict[str, Any]) -> KrausChannel:
    generator = liouvillian_from_spec(
        _spec_value(spec, 'liouvillian'), beta=_spec_value(spec, 'beta')
    )
    return semigroup_step(generator, _spec_value(spec, 't'))


@generator_kind(key='thermal')
def _thermal_generator_from_spec(spec: Dict[str, Any],
                                 beta: float,
                                 ) -> LiouvillianSpec:
    return thermal_generator(
        persist.matrix_from_json(_spec_value(spec, 'hamiltonian')),
        beta, spec.get('rate', 1.)
    )


@generator_kind(key='pauli')
def _pauli_generator_from_spec(spec: Dict[str, Any],
                               beta: float,
                               ) -> LiouvillianSpec:
    return pauli_generator(_spec_value(spec, 'q'))


@generator_kind(key='gkls')
def _gkls_generator_from_spec(spec: Dict[str, Any],
                              beta: float,
                              ) -> LiouvillianSpec:
    return gkls_generator(
        persist.matrix_from_json(_spec_value(spec, 'hamiltonian')),
        [persist.matrix_from_json(j) for j in spec.get('jumps', [])],
        beta,
    )


def from_spec(spec: Dict[str, Any]) -> KrausChannel:
    """Build a channel from its configuration dictionary.

    :param spec: A dictionary with a ``type`` key naming an entry of
        :data:`CHANNELS` and the parameters of that channel type.
    """
    return get(_spec_value(spec, 'type'))(spec)


def liouvillian_from_spec(spec: Dict[str, Any],
                          beta: float,
                          ) -> LiouvillianSpec:
    """Build a generator from its configuration dictionary (``kind`` key
    naming an entry of :data:`GENERATORS`)."""
    return get_generator(_spec_value(spec, 'kind'))(spec, beta)
