"""Sweep the circuit depth and compare empirical sample needs to the bounds.

For each depth ``L`` of a layered circuit the scan evaluates the
depth-dependent sampling bounds, measures the empirical sample requirement
of a mitigation protocol and checks that no applicable bound exceeds it.
The slope of ``ln n_hat`` against ``L`` is fitted over all certified
depths and can be compared to the exponent ``2 ln(1 / (1 - gamma))`` of
the bounds.
"""

import math
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from qembound import channels
from qembound import divergences
from qembound import numkit
from qembound import util
from qembound.bounds import core as bounds_core
from qembound.bounds import layered
from qembound.bounds.core import (
    AccuracyTarget, BoundReport, LayeredSpec, StateSet,
)
from qembound.divergences import ObservableSet
from qembound.mitigation import circuit
from qembound.mitigation import harness
from qembound.mitigation.circuit import LayeredCircuit
from qembound.mitigation.protocols import ProtocolSpec
from qembound.numkit import DensityMatrix, InvalidArgument, Observable


logger = logging.getLogger(__name__)

ENSEMBLE_UNRESOLVED = 'EnsembleUnresolved'
PREMISE_UNMET = 'PremiseUnmet'
UNACHIEVABLE = 'Unachievable'

CSV_COLUMNS = (
    'L', 'bound_thm4', 'bound_E1', 'n_hat', 'slope_fit',
    'bound_E2', 'bound_thm1_fid', 'bound_thm1_rel', 'flags',
)


def induced_ensemble(c: LayeredCircuit,
                     protocol: ProtocolSpec,
                     ) -> Optional[channels.NoiseEnsemble]:
    """The effective channels producing the samples a protocol consumes.

    ZNE draws from the circuit at each scale factor. PEC draws from
    circuits with Pauli corrections inserted; for a single qubit without
    sandwich channels these equal the native channel followed by a unitary,
    which leaves every fidelity and relative entropy unchanged, so the
    native channel stands for all of them. In other cases None is returned.
    """
    if protocol.kind == 'zne':
        return channels.NoiseEnsemble([
            circuit.effective_channel(c, scale)
            for scale in protocol.scale_factors
        ])
    if protocol.kind == 'pec' and (c.qubits > 1
                                   or c.spec.sandwich is not None):
        return None
    return channels.NoiseEnsemble([circuit.effective_channel(c)])


class ScanRow:
    """Bounds and the empirical requirement at one circuit depth."""

    def __init__(self,
                 layers: int,
                 bounds: Dict[str, Optional[BoundReport]],
                 n_hat: Optional[int],
                 curve: Sequence[harness.CurvePoint] = (),
                 flags: Sequence[str] = (),
                 ):
        self.layers = layers
        self.bounds = bounds
        self.n_hat = n_hat
        self.curve = list(curve)
        self.flags = tuple(dict.fromkeys(flags))

    def bound_value(self, formula_id: str) -> Optional[float]:
        report = self.bounds.get(formula_id)
        return None if report is None else report.value

    def violations(self) -> List[Tuple[str, float]]:
        """Applicable bounds exceeding the certified requirement."""
        if self.n_hat is None:
            return []
        return [
            (formula_id, report.value)
            for formula_id, report in self.bounds.items()
            if report is not None and report.value is not None
            and report.value > self.n_hat
        ]

    def __repr__(self):
        return f'<ScanRow L={self.layers} n_hat={self.n_hat}>'


class ScanResult:
    """All rows of a depth scan with the fitted growth rate.

    :param slope_fit: Least squares slope of ``ln n_hat`` against ``L``.
    :param bound_slope: The bounds' exponent ``2 ln(1 / (1 - gamma))``.
    """

    def __init__(self,
                 rows: List[ScanRow],
                 slope_fit: float,
                 bound_slope: float,
                 ):
        self.rows = rows
        self.slope_fit = slope_fit
        self.bound_slope = bound_slope

    def violations(self) -> List[Tuple[int, str, float, int]]:
        return [
            (row.layers, formula_id, value, row.n_hat)
            for row in self.rows
            for formula_id, value in row.violations()
        ]

    def csv_rows(self) -> List[Dict[str, Any]]:
        return [{
            'L': row.layers,
            'bound_thm4': row.bound_value('thm4'),
            'bound_E1': row.bound_value('appE1'),
            'n_hat': row.n_hat,
            'slope_fit': self.slope_fit,
            'bound_E2': row.bound_value('appE2'),
            'bound_thm1_fid': row.bound_value('thm1_fid'),
            'bound_thm1_rel': row.bound_value('thm1_rel'),
            'flags': ';'.join(row.flags),
        } for row in self.rows]

    def to_record(self) -> Dict[str, Any]:
        return {
            'slope_fit': self.slope_fit,
            'bound_slope': self.bound_slope,
            'violations': [list(v) for v in self.violations()],
            'rows': [{
                'L': row.layers,
                'n_hat': row.n_hat,
                'flags': list(row.flags),
                'bounds': {
                    formula_id: report.to_record()
                    for formula_id, report in row.bounds.items()
                    if report is not None
                },
                'curve': [point._asdict() for point in row.curve],
            } for row in self.rows],
        }


def _default_inputs(qubits: int) -> List[DensityMatrix]:
    return [numkit.ket_state('0' * qubits), numkit.ket_state('1' * qubits)]


def _default_observable(qubits: int) -> Observable:
    return numkit.pauli('Z' + 'I' * (qubits - 1))


def depth_bounds(c: LayeredCircuit,
                 inputs: Sequence[DensityMatrix],
                 a: Observable,
                 protocol: ProtocolSpec,
                 target: AccuracyTarget,
                 ) -> Tuple[Dict[str, Optional[BoundReport]], List[str]]:
    """All bounds applicable to a circuit, its inputs and a protocol.

    The layered bounds require a pair of ideal outputs that the observable
    separates by at least ``2 delta``; without one they are omitted with
    the ``PremiseUnmet`` flag.
    """
    ideal = [circuit.ideal_state(c, rho) for rho in inputs]
    oset = ObservableSet.explicit([a])
    d_o = max(
        (divergences.observable_distinguishability(ideal[i], ideal[j], oset)
         for i, j in util.unordered_pairs(len(ideal))),
        default=0.,
    )
    flags = []
    bounds: Dict[str, Optional[BoundReport]] = {}
    if d_o >= 2 * target.delta - bounds_core.ADMISSIBILITY_TOL:
        bounds['thm4'] = layered.thm4_bound(c.spec, target)
        e1, e2 = layered.appendixE_bounds(c.spec, target=target)
        bounds['appE1'] = e1
        bounds['appE2'] = e2
    else:
        flags.append(PREMISE_UNMET)
    ensemble = induced_ensemble(c, protocol)
    if ensemble is None:
        flags.append(ENSEMBLE_UNRESOLVED)
    else:
        fid, rel = bounds_core.thm1_bound(StateSet.explicit(ideal), ensemble,
                                          oset, target)
        bounds['thm1_fid'] = fid
        bounds['thm1_rel'] = rel
    return bounds, flags


def layered_scan(qubits: int,
                 layer_range: Sequence[int],
                 gamma: float,
                 target: AccuracyTarget,
                 protocol: ProtocolSpec,
                 trials: int = harness.DEFAULT_TRIALS,
                 n_max: int = harness.DEFAULT_N_MAX,
                 rng: numkit.RandomLike = None,
                 threads: int = 1,
                 inputs: Optional[Sequence[DensityMatrix]] = None,
                 observable: Optional[Observable] = None,
                 unitaries: str = 'random',
                 ) -> ScanResult:
    """Scan circuit depths, measuring sample requirements against bounds.

    Every depth gets its own circuit with unitaries drawn from a generator
    derived from the master seed and the depth. The requirement is the
    largest over all inputs with the observable.

    Random layer unitaries can bring the ideal outputs closer than
    ``2 delta`` at some depths; the layered bounds are omitted there with
    the ``PremiseUnmet`` flag. Identity unitaries keep the default inputs
    separated at every depth.

    :param inputs: Input states; all-zeros and all-ones by default.
    :param observable: Measured observable; ``Z`` on the first qubit by
        default.
    :param unitaries: ``random`` or ``identity`` layer unitaries.
    """
    layer_range = list(layer_range)
    if not layer_range or min(layer_range) < 1:
        raise InvalidArgument('layer range', layer_range,
                              'nonempty, positive depths')
    inputs = list(inputs) if inputs is not None else _default_inputs(qubits)
    a = observable if observable is not None else _default_observable(qubits)
    seed = numkit.draw_seed(rng)
    rows = []
    for layers in layer_range:
        spec = LayeredSpec(qubits, layers, gamma)
        c = LayeredCircuit.build(spec, numkit.derive_rng(seed, layers, 0),
                                 unitaries=unitaries)
        bounds, flags = depth_bounds(c, inputs, a, protocol, target)
        try:
            found = harness.empirical_sample_requirement(
                c, inputs[0], a, protocol, target, trials=trials,
                rng=numkit.derive_rng(seed, layers, 1), n_max=n_max,
                threads=threads, grid=[(rho, a) for rho in inputs[1:]],
            )
        except harness.Unachievable as err:
            logger.warning('L=%d: %s', layers, err)
            rows.append(ScanRow(layers, bounds, None,
                                flags=flags + [UNACHIEVABLE]))
            continue
        row = ScanRow(layers, bounds, found.n_hat, found.curve,
                      flags + list(found.flags))
        for formula_id, value in row.violations():
            logger.error('L=%d: bound %s = %.6g exceeds n_hat = %d',
                         layers, formula_id, value, found.n_hat)
        logger.info('L=%d: n_hat %d, thm4 bound %s', layers, found.n_hat,
                    row.bound_value('thm4'))
        rows.append(row)
    certified = [row for row in rows if row.n_hat is not None]
    slope = util.loglinear_slope([row.layers for row in certified],
                                 [row.n_hat for row in certified])
    return ScanResult(rows, slope, -2 * math.log(1 - gamma))
