"""Dense complex-matrix primitives for finite-dimensional quantum states.

States and observables are plain complex :class:`numpy.ndarray` objects;
the aliases defined here only document intent. Validators check the
defining invariants and raise the errors from this module when a matrix
does not conform:

-   A *density matrix* is square, Hermitian within :data:`HERMITIAN_TOL`,
    has unit trace within :data:`TRACE_TOL` and no eigenvalue below
    ``-PSD_TOL``.
-   An *observable* is a square Hermitian matrix.

Functions of positive semidefinite matrices are evaluated through the
Hermitian eigendecomposition. Eigenvalues below
``SUPPORT_CUTOFF * max_eigenvalue`` are considered to lie outside the
support, so that ``log`` never sees a zero.

Random instances are drawn from an explicit :class:`numpy.random.Generator`;
any function accepting ``rng`` also accepts an integer seed or None.
"""

import math
import functools
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import scipy.linalg


ComplexMatrix = np.ndarray
DensityMatrix = np.ndarray
Observable = np.ndarray
RandomLike = Union[None, int, np.random.Generator]

HERMITIAN_TOL: float = 1e-10
TRACE_TOL: float = 1e-10
PSD_TOL: float = 1e-10
SUPPORT_CUTOFF: float = 1e-12

PAULI_MATRICES: Dict[str, np.ndarray] = {
    'I': np.array([[1, 0], [0, 1]], dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}


class QEMError(Exception):
    """Base class of all errors raised by the toolkit."""
    pass


class InvalidMatrix(QEMError, ValueError):
    """A matrix is not of the expected shape or symmetry."""

    def __init__(self, reason: str, shape: Optional[Tuple[int, ...]] = None):
        message = reason if shape is None else f'{reason} (shape {shape})'
        super().__init__(message)
        self.reason = reason
        self.shape = shape


class NotPSD(QEMError, ValueError):
    """A matrix expected to be positive semidefinite has a negative
    eigenvalue beyond tolerance."""

    def __init__(self, min_eigenvalue: float):
        super().__init__(
            f'matrix not positive semidefinite: minimum eigenvalue '
            f'{min_eigenvalue:.3e}'
        )
        self.min_eigenvalue = min_eigenvalue


class InvalidArgument(QEMError, ValueError):
    """A scalar or structural argument lies outside its admissible range."""

    def __init__(self, name: str, value, expected: str):
        super().__init__(f'invalid {name}: {value!r}, expected {expected}')
        self.name = name
        self.value = value
        self.expected = expected


def as_square(m) -> ComplexMatrix:
    """Convert to a complex square two-dimensional array or fail."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidMatrix('square matrix expected', arr.shape)
    return arr


def hermitian_residual(m: ComplexMatrix) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> ComplexMatrix:
    """Validate a Hermitian matrix and return its symmetrized form.

    The tolerance is relative to the largest matrix entry (but not tighter
    than absolute ``tol``).
    """
    arr = as_square(m)
    scale = max(1., float(np.max(np.abs(arr))))
    if hermitian_residual(arr) > tol * scale:
        raise InvalidMatrix('Hermitian matrix expected', arr.shape)
    return (arr + arr.conj().T) / 2


def check_state(rho, tol: float = PSD_TOL) -> DensityMatrix:
    """Validate a density matrix, return it symmetrized.

    :raises InvalidMatrix: If not square, Hermitian or of unit trace.
    :raises NotPSD: If an eigenvalue falls below ``-tol``.
    """
    arr = check_hermitian(rho)
    trace = np.trace(arr).real
    if abs(trace - 1) > TRACE_TOL * max(1, arr.shape[0]):
        raise InvalidMatrix(f'unit trace expected, got {trace:.12g}',
                            arr.shape)
    min_eig = float(np.linalg.eigvalsh(arr)[0])
    if min_eig < -tol:
        raise NotPSD(min_eig)
    return arr


def check_observable(a) -> Observable:
    return check_hermitian(a)


def is_state(rho, tol: float = PSD_TOL) -> bool:
    try:
        check_state(rho, tol=tol)
    except (InvalidMatrix, NotPSD):
        return False
    return True


def eig_hermitian(m) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(m + m^dagger) / 2`` before decomposition.

    :param m: A square matrix, Hermitian within tolerance.
    :returns: A tuple of real eigenvalues in ascending order and an
        orthonormal matrix of the corresponding eigenvectors in columns.
    :raises InvalidMatrix: If the matrix is not square or not Hermitian.
    """
    sym = check_hermitian(m)
    values, vectors = np.linalg.eigh(sym)
    return values, vectors


def _positive_support(values: np.ndarray) -> np.ndarray:
    top = float(values[-1]) if values.size else 0.
    if top <= 0:
        return np.zeros_like(values, dtype=bool)
    return values > SUPPORT_CUTOFF * top


def _sqrt_values(values, support):
    return np.sqrt(values)


def _inv_sqrt_values(values, support):
    out = np.zeros_like(values)
    out[support] = 1 / np.sqrt(values[support])
    return out


def _log2_values(values, support):
    out = np.zeros_like(values)
    out[support] = np.log2(values[support])
    return out


def _ln_values(values, support):
    out = np.zeros_like(values)
    out[support] = np.log(values[support])
    return out


def _inv_values(values, support):
    out = np.zeros_like(values)
    out[support] = 1 / values[support]
    return out


MATRIX_FUNCTIONS: Dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    'sqrt': _sqrt_values,
    'inv_sqrt': _inv_sqrt_values,
    'log2': _log2_values,
    'ln': _ln_values,
    'inv': _inv_values,
}


def matrix_fn_psd(p, fn: Union[str, Callable[[np.ndarray], np.ndarray]],
                  ) -> ComplexMatrix:
    """Apply a scalar function to a positive semidefinite matrix.

    Negative eigenvalues within tolerance are clamped to zero. Logarithms
    and inverses act on the support only (the kernel maps to zero).

    :param p: A positive semidefinite matrix.
    :param fn: Name of a function from :data:`MATRIX_FUNCTIONS` (``sqrt``,
        ``inv_sqrt``, ``log2``, ``ln``, ``inv``) or a vectorized callable
        applied to the clamped eigenvalues.
    :raises NotPSD: If the matrix has an eigenvalue below ``-PSD_TOL``.
    """
    values, vectors = eig_hermitian(p)
    scale = max(1., float(np.max(np.abs(values))))
    if values[0] < -PSD_TOL * scale:
        raise NotPSD(float(values[0]))
    values = np.clip(values, 0, None)
    if callable(fn):
        mapped = np.asarray(fn(values), dtype=float)
    else:
        try:
            value_fn = MATRIX_FUNCTIONS[fn]
        except KeyError:
            raise InvalidArgument('matrix function', fn,
                                  ', '.join(MATRIX_FUNCTIONS))
        mapped = value_fn(values, _positive_support(values))
    return (vectors * mapped) @ vectors.conj().T


def min_eigenvalue(m) -> float:
    return float(np.linalg.eigvalsh(check_hermitian(m))[0])


def trace_norm(x) -> float:
    """Sum of singular values."""
    return float(np.sum(np.linalg.svd(as_square(x), compute_uv=False)))


def tensor(*ms) -> ComplexMatrix:
    """Kronecker product of the operands in the given order."""
    if not ms:
        raise InvalidArgument('operand count', 0, 'at least one matrix')
    return functools.reduce(np.kron, [np.asarray(m, dtype=complex) for m in ms])


def pauli(label: str) -> ComplexMatrix:
    """A Pauli string operator, e.g. ``'XZ'`` for X on qubit 0 and Z on
    qubit 1 (qubit 0 is the most significant tensor factor)."""
    try:
        return tensor(*[PAULI_MATRICES[char] for char in label.upper()])
    except KeyError:
        raise InvalidArgument('Pauli label', label, 'a string over IXYZ')


def pauli_labels(n_qubits: int) -> List[str]:
    """All Pauli string labels on the given number of qubits, identity
    first, in lexicographic IXYZ order."""
    labels = ['']
    for _ in range(n_qubits):
        labels = [label + char for label in labels for char in 'IXYZ']
    return labels


def pauli_basis(n_qubits: int) -> List[ComplexMatrix]:
    return [pauli(label) for label in pauli_labels(n_qubits)]


def n_qubits_of(dim: int) -> int:
    """Number of qubits for a power-of-two dimension."""
    n = int(round(math.log2(dim))) if dim > 0 else -1
    if n < 0 or 2 ** n != dim:
        raise InvalidArgument('dimension', dim, 'a power of two')
    return n


def ket_state(bits: str) -> DensityMatrix:
    """Computational basis projector, e.g. ``ket_state('01')``.

    Also accepts ``'+'`` and ``'-'`` characters for the X eigenstates.
    """
    singles = {
        '0': np.array([1, 0], dtype=complex),
        '1': np.array([0, 1], dtype=complex),
        '+': np.array([1, 1], dtype=complex) / math.sqrt(2),
        '-': np.array([1, -1], dtype=complex) / math.sqrt(2),
    }
    try:
        vector = functools.reduce(np.kron, [singles[char] for char in bits])
    except (KeyError, TypeError):
        raise InvalidArgument('basis label', bits, "a string over '01+-'")
    return np.outer(vector, vector.conj())


def maximally_mixed(dim: int) -> DensityMatrix:
    return np.eye(dim, dtype=complex) / dim


def gibbs_state(h, beta: float) -> DensityMatrix:
    """The thermal state exp(-beta H) / Z, shifted for numerical stability."""
    values, vectors = eig_hermitian(h)
    weights = np.exp(-beta * (values - values[0]))
    weights /= weights.sum()
    return (vectors * weights) @ vectors.conj().T


def von_neumann_entropy(rho, base: float = 2) -> float:
    values = np.clip(np.linalg.eigvalsh(check_hermitian(rho)), 0, None)
    values = values[values > SUPPORT_CUTOFF * max(values[-1], 1e-300)]
    return float(-np.sum(values * np.log(values)) / math.log(base))


def make_rng(rng: RandomLike = None) -> np.random.Generator:
    """Normalize a seed or generator into a generator (passed through)."""
    return np.random.default_rng(rng)


def derive_rng(seed: int, *index: int) -> np.random.Generator:
    """An independent generator for a given index path under a master seed.

    The stream depends only on the seed and the index path, so that work
    split across threads draws identical numbers regardless of scheduling.
    """
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=tuple(index))
    )


def draw_seed(rng: RandomLike) -> int:
    """Draw a master seed from a generator (or take an int seed as is)."""
    if isinstance(rng, (int, np.integer)) and not isinstance(rng, bool):
        return int(rng)
    return int(make_rng(rng).integers(2 ** 63))


def _gaussian(shape, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_state(dim: int,
                 kind: str = 'full_rank',
                 rng: RandomLike = None,
                 rank: Optional[int] = None,
                 ) -> DensityMatrix:
    """Draw a random density matrix.

    :param dim: Hilbert space dimension, at least 2.
    :param kind: ``pure`` for a Haar-random pure state, ``full_rank`` for
        a Wishart (Hilbert-Schmidt) mixed state ``G G^dagger / tr``
        with square complex Gaussian ``G``, ``rank_k`` for the same with
        a ``dim x rank`` Gaussian.
    :param rng: Random generator or seed.
    :param rank: Rank for the ``rank_k`` kind.
    :raises InvalidArgument: If the dimension or rank is out of range.
    """
    if dim < 2:
        raise InvalidArgument('dimension', dim, 'at least 2')
    rng = make_rng(rng)
    if kind == 'pure':
        vector = _gaussian(dim, rng)
        vector /= np.linalg.norm(vector)
        return np.outer(vector, vector.conj())
    elif kind == 'full_rank':
        ginibre = _gaussian((dim, dim), rng)
    elif kind == 'rank_k':
        if rank is None or not 1 <= rank <= dim:
            raise InvalidArgument('rank', rank, f'between 1 and {dim}')
        ginibre = _gaussian((dim, rank), rng)
    else:
        raise InvalidArgument('state kind', kind, 'pure, full_rank or rank_k')
    wishart = ginibre @ ginibre.conj().T
    wishart = (wishart + wishart.conj().T) / 2
    return wishart / np.trace(wishart).real


def random_unitary(dim: int, rng: RandomLike = None) -> ComplexMatrix:
    """A Haar-random unitary via QR of a complex Gaussian matrix with
    phase correction of the R diagonal."""
    if dim < 1:
        raise InvalidArgument('dimension', dim, 'at least 1')
    q, r = np.linalg.qr(_gaussian((dim, dim), make_rng(rng)))
    diag = np.diag(r)
    phases = diag / np.abs(diag)
    return q * phases


def random_observable(dim: int, rng: RandomLike = None,
                      norm: float = 1.) -> Observable:
    """A random Hermitian matrix scaled to the given operator norm."""
    g = _gaussian((dim, dim), make_rng(rng))
    h = (g + g.conj().T) / 2
    return h * (norm / np.max(np.abs(np.linalg.eigvalsh(h))))


def expm(m) -> ComplexMatrix:
    """Matrix exponential (Pade approximation with scaling and squaring)."""
    return scipy.linalg.expm(np.asarray(m, dtype=complex))
