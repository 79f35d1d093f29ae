"""Command line driver for sampling bound experiments.

Usage::

    qembound verify --config verify.json
    qembound bound --formula thm4 --M 2 --L 5 --gamma 0.1 --epsilon 0.25
    qembound layered-scan --config scan.json --threads 8 --out results

Every subcommand reads an experiment configuration (see
:mod:`qembound.config`); flags given on the command line override its
values. The ``bound`` subcommand for scalar formulas also works from flags
alone. Results are written as one JSON record per run and, for tabular
results, as a CSV table. Each record echoes the configuration and keeps
run provenance (tool version, master seed, wall time) under a separate
``provenance`` key, so that everything else is identical between runs
with the same seed.

Exit codes: 0 on success, 2 for an invalid configuration, 3 for a
numerical failure (including failed inequality suites and bounds exceeding
measured sample requirements), 4 when a sample requirement is
unachievable.
"""

import os
import sys
import time
import logging
import argparse
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

import qembound
from qembound import bounds
from qembound import config as qconfig
from qembound import contraction
from qembound import numkit
from qembound import util
from qembound import verify
from qembound.bounds.core import AccuracyTarget, LayeredSpec
from qembound.config import ConfigError, ExperimentConfig
from qembound.io import records
from qembound.mitigation import circuit
from qembound.mitigation import harness
from qembound.mitigation import scan
from qembound.numkit import InvalidArgument, QEMError


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_UNACHIEVABLE = 4

BOUND_FLAGS = (
    ('M', int), ('L', int), ('gamma', float), ('epsilon', float),
    ('delta', float), ('xi', float), ('sigma-max', float), ('b-max', float),
    ('d-o', float), ('eta', float), ('F', float), ('S', float),
)
SEARCH_FLAGS = ('delta', 'epsilon', 'sigma_max', 'b_max')

CURVE_COLUMNS = ('n', 'success_prob', 'wilson_lb', 'bias', 'std_dev')
SUITE_COLUMNS = ('name', 'instances', 'violations', 'max_slack', 'passed')
BOUND_COLUMNS = ('formula_id', 'value', 'flags')
THERMAL_COLUMNS = ('t', 'bound', 'free_energy_gap', 'relative_entropy')


class CommandResult:
    """What a subcommand produced.

    :param outputs: The JSON-ready payload.
    :param rows: Table rows for CSV output.
    :param columns: CSV column order.
    :param exit_code: The process exit code to report after writing.
    """

    def __init__(self,
                 outputs: Dict[str, Any],
                 rows: Sequence[Dict[str, Any]] = (),
                 columns: Sequence[str] = (),
                 exit_code: int = EXIT_OK,
                 ):
        self.outputs = outputs
        self.rows = list(rows)
        self.columns = tuple(columns)
        self.exit_code = exit_code


def run_verify(cfg: ExperimentConfig, resolved: Dict[str, Any]) -> CommandResult:
    params = cfg.parameters
    reports = verify.run_suites(params['suites'], params['samples'],
                                rng=cfg.seed)
    suites = [report.to_record() for report in reports]
    passed = all(report.passed for report in reports)
    return CommandResult(
        {'suites': suites, 'passed': passed}, suites, SUITE_COLUMNS,
        EXIT_OK if passed else EXIT_NUMERICAL,
    )


def _bound_rows(reports) -> List[Dict[str, Any]]:
    return [{'formula_id': r.formula_id, 'value': r.value,
             'flags': ';'.join(r.flags)} for r in reports]


def run_bound(cfg: ExperimentConfig, resolved: Dict[str, Any]) -> CommandResult:
    params = cfg.parameters
    formula = params['formula']
    if formula == 'thm1':
        reports = bounds.thm1_bound(resolved['states'], resolved['ensemble'],
                                    resolved['oset'], resolved['target'],
                                    rng=cfg.seed)
    elif formula == 'thm3':
        reports = [bounds.thm3_bound(resolved['states'], resolved['ensemble'],
                                     resolved['oset'], resolved['moments'],
                                     rng=cfg.seed)]
    else:
        try:
            reports = [bounds.evaluate_formula(formula, **params['inputs'])]
        except InvalidArgument as err:
            raise ConfigError('parameters.inputs', str(err))
    for report in reports:
        logger.info('%s = %s', report.formula_id, report.value)
    return CommandResult(
        {'reports': [report.to_record() for report in reports]},
        _bound_rows(reports), BOUND_COLUMNS,
    )


def run_contraction(cfg: ExperimentConfig,
                    resolved: Dict[str, Any],
                    ) -> CommandResult:
    params = cfg.parameters
    ensemble = resolved['ensemble']
    estimate = contraction.estimate_eta(
        ensemble, resolved['oset'], params['restarts'],
        params['refine_steps'], rng=numkit.derive_rng(cfg.seed, 0),
    )
    outputs = {
        'eta': estimate.value,
        'method': estimate.method,
        'iterations': estimate.iterations,
        'budget': estimate.budget,
        'witness_hashes': [util.matrix_hash(state)
                           for state in (estimate.witness or ())],
    }
    rows = [{'formula_id': 'eta', 'value': estimate.value, 'flags': ''}]
    if 'target' in resolved:
        try:
            report = bounds.prop2_bound(estimate.value, resolved['target'])
        except InvalidArgument as err:
            logger.warning('no contraction bound: %s', err)
            outputs['prop2'] = None
        else:
            outputs['prop2'] = report.to_record()
            rows.extend(_bound_rows([report]))
    exit_code = EXIT_OK
    if 'check' in resolved:
        check = resolved['check']
        found = contraction.verify_contraction(
            ensemble[0], check['fixed'], check['xi'], check['divergence'],
            check['samples'], rng=numkit.derive_rng(cfg.seed, 1),
        )
        outputs['check'] = {
            'xi_claimed': check['xi'],
            'divergence': check['divergence'],
            'max_ratio': found.max_ratio,
            'violation_count': found.violation_count,
            'samples_used': found.samples_used,
            'samples_skipped': found.samples_skipped,
        }
        if found.violation_count:
            exit_code = EXIT_NUMERICAL
    return CommandResult(outputs, rows, BOUND_COLUMNS, exit_code)


def run_layered_scan(cfg: ExperimentConfig,
                     resolved: Dict[str, Any],
                     ) -> CommandResult:
    params = cfg.parameters
    result = scan.layered_scan(
        params['M'], resolved['layers'], params['gamma'], resolved['target'],
        resolved['protocol'], trials=params['trials'],
        n_max=params['n_max'], rng=cfg.seed, threads=cfg.threads,
        unitaries=params['unitaries'],
    )
    violations = result.violations()
    return CommandResult(
        result.to_record(), result.csv_rows(), scan.CSV_COLUMNS,
        EXIT_NUMERICAL if violations else EXIT_OK,
    )


def run_mitigate(cfg: ExperimentConfig,
                 resolved: Dict[str, Any],
                 ) -> CommandResult:
    params = cfg.parameters
    c = circuit.LayeredCircuit.build(
        LayeredSpec(params['M'], params['L'], params['gamma']),
        rng=numkit.derive_rng(cfg.seed, 0), unitaries=params['unitaries'],
    )
    rho_in, a = resolved['input'], resolved['observable']
    protocol = resolved['protocol']
    stats = harness.estimator_stats(
        c, rho_in, a, protocol, params['n'], params['trials'],
        params['delta'], rng=numkit.derive_rng(cfg.seed, 1),
        threads=cfg.threads,
    )
    outputs = {
        'ideal_expectation': circuit.ideal_expectation(c, rho_in, a),
        'noisy_expectation': circuit.noisy_expectation(c, rho_in, a),
        'stats': stats.to_record(),
    }
    if protocol.kind == 'pec':
        outputs['pec_one_norm_total'] = circuit.pec_one_norm_total(
            c, protocol.assumed_gamma
        )
    rows = [dict(stats.to_record(), n=stats.n_per_trial,
                 flags=';'.join(stats.flags))]
    columns = ('n', 'mean', 'bias', 'std_dev', 'success_prob', 'trials',
               'flags')
    if 'target' in resolved:
        found = harness.empirical_sample_requirement(
            c, rho_in, a, protocol, resolved['target'],
            trials=params['trials'], rng=numkit.derive_rng(cfg.seed, 2),
            n_max=params['n_max'], threads=cfg.threads,
        )
        curve = [point._asdict() for point in found.curve]
        outputs['n_hat'] = found.n_hat
        outputs['curve'] = curve
        rows, columns = curve, CURVE_COLUMNS
    return CommandResult(outputs, rows, columns)


def run_thermal(cfg: ExperimentConfig,
                resolved: Dict[str, Any],
                ) -> CommandResult:
    params = cfg.parameters
    generator = resolved['generator']
    target = AccuracyTarget(0., params['epsilon'])
    rows = []
    for t in params['t_grid']:
        report = bounds.thermal_sample_bound(resolved['input'], generator, t,
                                             target)
        rows.append({
            't': t,
            'bound': report.value,
            'free_energy_gap': report.details['free_energy_gap'],
            'relative_entropy': report.details['relative_entropy'],
        })
    outputs = {
        'rows': rows,
        'slope_fit': util.loglinear_slope([r['t'] for r in rows],
                                          [r['bound'] for r in rows]),
    }
    if params['alpha_samples'] > 0:
        alpha = bounds.alpha_ent_estimate(
            generator, params['alpha_samples'], rng=cfg.seed,
            refine_steps=params['refine_steps'],
        )
        outputs['alpha_ent'] = alpha.value
    return CommandResult(outputs, rows, THERMAL_COLUMNS)


COMMAND_HANDLERS = {
    'verify': run_verify,
    'bound': run_bound,
    'contraction': run_contraction,
    'layered-scan': run_layered_scan,
    'mitigate': run_mitigate,
    'thermal': run_thermal,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qembound',
        description='Sampling cost lower bounds for quantum error mitigation.',
    )
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {qembound.__version__}')
    commands = parser.add_subparsers(dest='command', required=True)
    for command in qconfig.COMMANDS:
        sub = commands.add_parser(command)
        sub.add_argument('--config', help='experiment configuration file')
        sub.add_argument('--seed', type=int, help='master seed')
        sub.add_argument('--out', help='output directory')
        sub.add_argument('--threads', type=int, help='worker threads')
        sub.add_argument('--format', choices=qconfig.FORMATS,
                         help='output format')
        sub.add_argument('-v', '--verbose', action='count', default=0,
                         help='more logging (repeat for debug)')
        if command == 'bound':
            sub.add_argument('--formula', help='formula identifier')
            for flag, kind in BOUND_FLAGS:
                sub.add_argument(f'--{flag}', type=kind,
                                 dest=flag.replace('-', '_'))
    return parser


def configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level, format='%(asctime)s %(name)s %(levelname)s %(message)s'
    )


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Load the configuration file (if any) and apply the flag overrides."""
    overrides = {
        'seed': args.seed,
        'threads': args.threads,
        'output_path': args.out,
        'output_format': args.format,
    }
    if args.config is not None:
        cfg = ExperimentConfig.load(args.config)
        if cfg.command != args.command:
            raise ConfigError('command', f'configuration is for '
                                         f'{cfg.command!r}, not {args.command!r}')
    else:
        parameters = {}
        if args.command == 'bound' and args.formula is not None:
            parameters['formula'] = args.formula
        cfg = ExperimentConfig(args.command, args.seed, parameters)
    if args.command == 'bound':
        if args.formula is not None:
            overrides['formula'] = args.formula
        formula = args.formula or cfg.parameters['formula']
        inputs = dict(cfg.parameters['inputs'])
        for flag, kind in BOUND_FLAGS:
            key = flag.replace('-', '_')
            value = getattr(args, key)
            if value is None:
                continue
            if formula in qconfig.SEARCH_FORMULAS and key in SEARCH_FLAGS:
                overrides[key] = value
            else:
                inputs[key] = value
        overrides['inputs'] = inputs
    return cfg.with_overrides(**overrides)


def write_results(cfg: ExperimentConfig,
                  result: CommandResult,
                  wall_time: float,
                  stdout=None,
                  ) -> None:
    record = {
        'command': cfg.command,
        'config': cfg.to_dict(),
        'outputs': result.outputs,
        'provenance': {
            'tool_version': qembound.__version__,
            'master_seed': cfg.seed,
            'wall_time': wall_time,
        },
    }
    want_json = cfg.output_format in ('json', 'both')
    want_csv = cfg.output_format in ('csv', 'both') and result.columns
    out_dir = cfg.output_dir()
    if out_dir is None:
        stdout = stdout or sys.stdout
        if want_json:
            records.dump_records(stdout, [record])
        if want_csv:
            records.dump_table(stdout, result.rows, result.columns)
        return
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, cfg.command)
    if want_json:
        with open(stem + '.jsonl', 'w', encoding='utf8') as outfile:
            records.dump_records(outfile, [record])
    if want_csv:
        with open(stem + '.csv', 'w', encoding='utf8', newline='') as outfile:
            records.dump_table(outfile, result.rows, result.columns)
    logger.info('results written to %s', out_dir)


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    """Parse arguments, run the subcommand and write its results.

    :returns: The exit code.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        cfg = config_from_args(args)
        resolved = qconfig.resolve(cfg)
    except ConfigError as err:
        print(f'qembound: {err}', file=sys.stderr)
        return EXIT_CONFIG
    start = time.perf_counter()
    try:
        with np.errstate(all='ignore'):
            result = COMMAND_HANDLERS[cfg.command](cfg, resolved)
    except ConfigError as err:
        print(f'qembound: {err}', file=sys.stderr)
        return EXIT_CONFIG
    except harness.Unachievable as err:
        print(f'qembound: unachievable: {err}', file=sys.stderr)
        return EXIT_UNACHIEVABLE
    except (QEMError, np.linalg.LinAlgError, FloatingPointError) as err:
        print(f'qembound: numerical failure: {err}', file=sys.stderr)
        return EXIT_NUMERICAL
    write_results(cfg, result, time.perf_counter() - start, stdout)
    return result.exit_code


def main() -> None:
    sys.exit(run())
