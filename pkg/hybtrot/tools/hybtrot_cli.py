#!/usr/bin/env python3
"""
hybtrot/tools/hybtrot_cli.py - Experiment driver for hybrid Trotter schemes.
Copyright 2026 the hybtrot authors

This library is free software: you can redistribute it and/or modify
it under the terms of the GNU Lesser General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

This library is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU Lesser General Public License for more details.

You should have received a copy of the GNU Lesser General Public License
along with this library.  If not, see <http://www.gnu.org/licenses/>.
"""

from __future__ import absolute_import
from __future__ import print_function

from argparse import ArgumentParser, Namespace
import dataclasses
import io
import logging
import os
import shlex
import sys
from typing import Any, Dict, List, Optional, Sequence, Text

import numpy as np

from hybtrot import __version__
from hybtrot.analysis.bounds import BoundReport, bias_expectation
from hybtrot.analysis.ensemble import (
    bias_of_mean, fit_loglog_slope, run_ensemble)
from hybtrot.analysis.estimator import (
    argmin_nd, estimator_point, nd_grid, partition_constants)
from hybtrot.analysis.report import (
    METADATA_FILE, file_digest, read_metadata, write_ensemble_csv,
    write_metadata, write_table, write_table_csv)
from hybtrot.common import (
    DEFAULT_COEFF_FLOOR, DEFAULT_ENSEMBLES, DEFAULT_MODES,
    FIDELITY_IDENTITY_TOLERANCE, SAMPLER_FLAGS, SCHEME_FLAGS, U0_FLAGS,
    NumericalError, SamplerMode, Scheme, U0Mode, ValidationError)
from hybtrot.evolve import StateVector, eigenmode_superposition, ground_state
from hybtrot.hamiltonian import (
    PartitionedHamiltonian, heisenberg_chain, load_hamiltonian,
    write_hamiltonian)
from hybtrot.sampling import SamplerSpec
from hybtrot.scheme import SchemeConfig, even_record_times, make_sampler

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

DEFAULT_SWEEP_DT = 0.0125
DEFAULT_SWEEP_POINTS = 4
DEFAULT_RECORDS = 20

MAGNITUDE_COLUMNS = ('index', 'magnitude', 'coeff', 'pauli')
CONSTANT_COLUMNS = (
    'n_d', 'n_r', 'k', 'Lambda', 'Gamma', 'gamma_is_bound', 'comm_norm', 'C')
BIAS_COLUMNS = ('time', 'bias', 'bound')
MSE_VS_DT_COLUMNS = (
    'dt', 'time', 'mse', 'mse_stderr', 'fidelity_err', 'bias_sq',
    'gate_count')
MSE_VS_ND_COLUMNS = (
    'n_d', 'k', 'dt', 'n_steps', 'gate_count', 'time', 'mse', 'mse_stderr',
    'fidelity_err', 'bias_sq', 'Lambda', 'Gamma', 'comm_norm', 'C',
    'estimate_variance', 'estimate_bias', 'estimate')


def _logging_parent() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    group = parser.add_argument_group('Logging options')
    group.add_argument(
        '-l', '--log-file',
        dest='log', default=None,
        help='Destination to write logs [default: stderr]')

    group.add_argument(
        '-v', '--verbosity',
        dest='verbosity', default='INFO', choices=(
            'CRITICAL', 'ERROR', 'WARNING', 'INFO', 'DEBUG'),
        help='Verbosity of logging to emit [default: %(default)s]')
    return parser


def _hamiltonian_parent() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    group = parser.add_argument_group('Hamiltonian options')
    source = group.add_mutually_exclusive_group(required=True)
    source.add_argument(
        '-H', '--hamiltonian', metavar='PATH',
        help='Hamiltonian file: a "qubits N" line, then "coeff paulis" lines')
    source.add_argument(
        '--chain', metavar='N', type=int,
        help='Use the N-site Heisenberg chain instead of a file')

    group.add_argument(
        '--field-seed', metavar='SEED',
        type=int, default=0,
        help='Seed for the chain\'s random field [default: %(default)s]')

    group.add_argument(
        '--coeff-floor', metavar='VALUE',
        type=float, default=DEFAULT_COEFF_FLOOR,
        help='Drop file terms smaller than this in magnitude '
             '[default: %(default)s]')
    return parser


def _scheme_parent() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    group = parser.add_argument_group('Scheme options')
    group.add_argument(
        '--scheme',
        default='hyb1', choices=SCHEME_FLAGS,
        help='Time stepping scheme [default: %(default)s]')

    group.add_argument(
        '--nd', metavar='N_D',
        type=int, default=0,
        help='Number of largest terms evolved deterministically '
             '[default: %(default)s]')

    group.add_argument(
        '--k', metavar='K',
        type=int, default=1,
        help='Terms sampled per step [default: %(default)s]')

    group.add_argument(
        '--sampler',
        default='importance', choices=SAMPLER_FLAGS,
        help='How sampled terms are picked [default: %(default)s]')

    group.add_argument(
        '--u0',
        default='exact', choices=U0_FLAGS,
        help='How the deterministic part is evolved [default: %(default)s]')

    group.add_argument(
        '--t-final', metavar='T',
        type=float, default=1.,
        help='Simulation horizon [default: %(default)s]')

    step = group.add_mutually_exclusive_group()
    step.add_argument(
        '--dt', metavar='DT',
        type=float, default=None,
        help='Step size')
    step.add_argument(
        '--gates', metavar='N_GATE',
        type=int, default=None,
        help='Gate budget; the step size is derived from it')

    group.add_argument(
        '--seed', metavar='SEED',
        type=int, default=0,
        help='Base seed of the trajectory random streams '
             '[default: %(default)s]')
    return parser


def _ensemble_parent() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    group = parser.add_argument_group('Ensemble options')
    group.add_argument(
        '-M', '--ensembles', metavar='M',
        type=int, default=DEFAULT_ENSEMBLES,
        help='Trajectories per ensemble [default: %(default)s]')

    group.add_argument(
        '--initial',
        default='ground', choices=('ground', 'modes', 'basis'),
        help='Initial state: the ground state, a seeded combination of the '
             f'lowest {DEFAULT_MODES} eigenmodes, or a computational basis '
             'state [default: %(default)s]')

    group.add_argument(
        '--state-seed', metavar='SEED',
        type=int, default=0,
        help='Seed of the eigenmode coefficients [default: %(default)s]')

    group.add_argument(
        '--basis-index', metavar='INDEX',
        type=int, default=0,
        help='Basis state for --initial basis [default: %(default)s]')

    group.add_argument(
        '--records', metavar='COUNT',
        type=int, default=DEFAULT_RECORDS,
        help='Evenly spaced record times after t = 0 [default: %(default)s]')

    group.add_argument(
        '-j', '--workers', metavar='COUNT',
        type=int, default=1,
        help='Worker processes for trajectories [default: %(default)s]')
    return parser


def _output_parent() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    group = parser.add_argument_group('Output options')
    group.add_argument(
        '-o', '--out', metavar='DIR',
        required=True,
        help='Directory for CSV files and metadata.txt')
    return parser


def build_parser() -> ArgumentParser:
    logging_opts = _logging_parent()
    hamiltonian_opts = _hamiltonian_parent()
    scheme_opts = _scheme_parent()
    ensemble_opts = _ensemble_parent()
    output_opts = _output_parent()

    parser = ArgumentParser(
        prog='hybtrot',
        description='Simulate hybrid deterministic/random Trotter schemes.')
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser(
        'gen-chain', parents=[logging_opts],
        help='Write a Heisenberg chain Hamiltonian file')
    p.add_argument('sites', metavar='N', type=int, help='Number of sites')
    p.add_argument(
        '--field-seed', metavar='SEED',
        type=int, default=0,
        help='Seed for the random field [default: %(default)s]')
    p.add_argument(
        '-o', '--out', metavar='PATH', default='-',
        help='File to write [default: stdout]')
    p.set_defaults(handler=cmd_gen_chain)

    p = sub.add_parser(
        'inspect', parents=[logging_opts, hamiltonian_opts, scheme_opts,
                            ensemble_opts],
        help='Print term magnitudes and per-partition constants')
    p.add_argument(
        '--nd-stride', metavar='STRIDE',
        type=int, default=1,
        help='Spacing of the n_d grid [default: %(default)s]')
    p.add_argument(
        '-o', '--out', metavar='DIR', default=None,
        help='Also write magnitudes.csv and constants.csv here')
    p.set_defaults(handler=cmd_inspect)

    p = sub.add_parser(
        'run', parents=[logging_opts, hamiltonian_opts, scheme_opts,
                        ensemble_opts, output_opts],
        help='Run one ensemble and write its error time series')
    p.add_argument(
        '--bias', action='store_true',
        help='Also write the bias of the ensemble mean and its bound')
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser(
        'sweep-dt', parents=[logging_opts, hamiltonian_opts, scheme_opts,
                             ensemble_opts, output_opts],
        help='Run ensembles at successively halved step sizes')
    p.add_argument(
        '--points', metavar='COUNT',
        type=int, default=DEFAULT_SWEEP_POINTS,
        help='Number of step sizes [default: %(default)s]')
    p.add_argument(
        '--at-time', metavar='T',
        type=float, default=None,
        help='Time at which MSE is compared [default: the horizon]')
    p.set_defaults(handler=cmd_sweep_dt)

    p = sub.add_parser(
        'sweep-nd', parents=[logging_opts, hamiltonian_opts, scheme_opts,
                             ensemble_opts, output_opts],
        help='Run ensembles over the n_d grid at a fixed gate budget')
    p.add_argument(
        '--nd-stride', metavar='STRIDE',
        type=int, default=1,
        help='Spacing of the n_d grid [default: %(default)s]')
    p.set_defaults(handler=cmd_sweep_nd)

    p = sub.add_parser(
        'bounds', parents=[logging_opts, hamiltonian_opts, scheme_opts,
                           ensemble_opts],
        help='Print the closed-form error bounds and gate counts')
    p.add_argument(
        '--eps', type=float, default=0.1,
        help='Target accuracy [default: %(default)s]')
    p.add_argument(
        '--delta', type=float, default=0.1,
        help='Failure probability [default: %(default)s]')
    p.add_argument(
        '--at-time', metavar='T',
        type=float, default=None,
        help='Time the bounds are evaluated at [default: the horizon]')
    p.add_argument(
        '-o', '--out', metavar='DIR', default=None,
        help='Also write bounds.txt here')
    p.add_argument(
        '--bias', action='store_true',
        help='Also evaluate the expected bias norm and the bias bound')
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser(
        'replay', parents=[logging_opts],
        help='Re-run an experiment from its metadata record')
    p.add_argument('source', metavar='DIR',
                   help='Output directory of the original run')
    p.add_argument(
        '-o', '--out', metavar='DIR', required=True,
        help='Directory for the replayed output')
    p.set_defaults(handler=cmd_replay)

    return parser


def load_model(options: Namespace) -> PartitionedHamiltonian:
    if options.hamiltonian:
        return load_hamiltonian(options.hamiltonian, options.coeff_floor)
    return heisenberg_chain(options.chain, options.field_seed)


def initial_state(h: PartitionedHamiltonian,
                  options: Namespace) -> StateVector:
    if options.initial == 'basis':
        return StateVector.basis(h.n_qubits, options.basis_index)
    if options.initial == 'ground':
        energy, state = ground_state(h.term_sum())
        logger.info('ground state energy %r', energy)
        return state
    return eigenmode_superposition(h.term_sum(), options.state_seed,
                                   DEFAULT_MODES)


def scheme_config(h: PartitionedHamiltonian, options: Namespace,
                  psi0: StateVector, n_d: Optional[int] = None,
                  require_step: bool = True) -> SchemeConfig:
    """
    Builds the SchemeConfig selected by the command line.

    :param n_d: Overrides ``--nd``.
    :param require_step: If False and neither --dt nor --gates was given, the
                         horizon is used as dt.
    """
    scheme = Scheme.from_flag(options.scheme)
    n_d = options.nd if n_d is None else n_d
    if scheme.is_hybrid:
        sampler = make_sampler(h, n_d, SamplerMode.from_flag(options.sampler),
                               options.k, psi0)
    else:
        sampler = SamplerSpec.uniform()

    dt, gates = options.dt, options.gates
    if dt is None and gates is None:
        if require_step:
            raise ValidationError('Give one of --dt and --gates')
        dt = options.t_final
    return SchemeConfig(
        scheme=scheme, n_d=n_d, sampler=sampler,
        u0_mode=U0Mode.from_flag(options.u0), t_final=options.t_final,
        dt=dt, gate_budget=gates, base_seed=options.seed)


def _needs_state(options: Namespace) -> bool:
    return (Scheme.from_flag(options.scheme).is_hybrid and
            SamplerMode.from_flag(options.sampler) ==
            SamplerMode.STATE_ADAPTIVE)


def _include_h0_splitting(cfg: SchemeConfig) -> bool:
    return not cfg.scheme.is_hybrid or cfg.u0_mode != U0Mode.EXACT


def _constants_n_d(h: PartitionedHamiltonian, cfg: SchemeConfig) -> int:
    # Deterministic schemes split every term.
    return cfg.n_d if cfg.scheme.is_hybrid else h.n_terms


def _prepare_out(path: Text) -> Text:
    os.makedirs(path, exist_ok=True)
    return path


def run_metadata(options: Namespace, argv: Sequence[Text],
                 h: PartitionedHamiltonian, cfg: SchemeConfig,
                 psi0: Optional[StateVector] = None) -> Dict[Text, Any]:
    """Everything needed to replay a run, plus its constants."""
    meta = {
        'tool': f'hybtrot {__version__}',
        'command': 'hybtrot ' + shlex.join(argv),
        'argv': shlex.join(argv),
        'subcommand': options.command,
        'hamiltonian': options.hamiltonian,
    }
    if options.hamiltonian:
        meta['hamiltonian_sha256'] = file_digest(options.hamiltonian)
        meta['coeff_floor'] = options.coeff_floor
    else:
        meta['chain_sites'] = options.chain
        meta['field_seed'] = options.field_seed
    meta.update({
        'n_qubits': h.n_qubits,
        'n_terms': h.n_terms,
        'identity_offset': h.identity_offset,
    })
    meta.update(cfg.describe())
    meta.update({
        'ensembles': options.ensembles,
        'initial': options.initial,
        'state_seed': options.state_seed,
        'basis_index': options.basis_index,
        'eigenmodes': min(DEFAULT_MODES, 1 << h.n_qubits),
        'records': options.records,
        'workers': options.workers,
        'reference': 'exact',
        'fidelity_identity_tolerance': FIDELITY_IDENTITY_TOLERANCE,
    })

    plan = cfg.plan(h.n_terms)
    meta.update({
        'gate_accounting': 'one unit per Pauli exponential',
        'u0_gate_cost': (cfg.u0_mode.gate_cost(cfg.n_d)
                         if cfg.scheme.is_hybrid else 0),
        'step_cost': plan.step_cost,
        'plan_dt': plan.dt,
        'n_steps': plan.n_steps,
        'gate_count': plan.gate_count,
        'horizon_residual': plan.residual,
    })

    n_d = _constants_n_d(h, cfg)
    c = partition_constants(h, n_d, cfg.sampler.mode,
                            cfg.sampler.batch_size,
                            _include_h0_splitting(cfg), psi0)
    meta.update({
        'Lambda': c.Lambda,
        'Gamma': c.Gamma,
        'gamma_is_bound': c.gamma_is_bound,
        'comm_norm': c.comm_norm,
        'C': c.C,
    })
    return meta


def cmd_gen_chain(options: Namespace, argv: Sequence[Text]) -> None:
    h = heisenberg_chain(options.sites, options.field_seed)
    if options.out == '-':
        write_hamiltonian(h, sys.stdout)
    else:
        with io.open(options.out, 'w', encoding='utf-8') as f:
            write_hamiltonian(h, f)
    logger.info('wrote %d terms for %d sites', h.n_terms, options.sites)


def cmd_inspect(options: Namespace, argv: Sequence[Text]) -> None:
    h = load_model(options)
    psi0 = initial_state(h, options) if _needs_state(options) else None
    mode = SamplerMode.from_flag(options.sampler)
    include = U0Mode.from_flag(options.u0) != U0Mode.EXACT

    magnitudes = [(i, abs(t.coeff), t.coeff, str(t.pauli))
                  for i, t in enumerate(h.terms)]
    constants = []
    for n_d in nd_grid(h.n_terms, options.nd_stride):
        c = partition_constants(h, n_d, mode, options.k, include, psi0)
        constants.append((n_d, h.n_terms - n_d, c.k, c.Lambda, c.Gamma,
                          c.gamma_is_bound, c.comm_norm, c.C))
        logger.debug('n_d=%d: %r', n_d, c)

    write_table(sys.stdout, MAGNITUDE_COLUMNS, magnitudes)
    print()
    write_table(sys.stdout, CONSTANT_COLUMNS, constants)
    if options.out:
        out = _prepare_out(options.out)
        write_table_csv(os.path.join(out, 'magnitudes.csv'),
                        MAGNITUDE_COLUMNS, magnitudes)
        write_table_csv(os.path.join(out, 'constants.csv'),
                        CONSTANT_COLUMNS, constants)


def cmd_run(options: Namespace, argv: Sequence[Text]) -> None:
    h = load_model(options)
    psi0 = initial_state(h, options)
    cfg = scheme_config(h, options, psi0)
    out = _prepare_out(options.out)
    times = even_record_times(cfg.t_final, options.records)
    meta = run_metadata(options, argv, h, cfg, psi0)

    if options.bias:
        series = bias_of_mean(h, cfg, psi0, options.ensembles, times,
                              options.workers)
        stats = series.stats
        write_table_csv(os.path.join(out, 'bias.csv'), BIAS_COLUMNS,
                        zip(series.times.tolist(), series.bias.tolist(),
                            series.bound.tolist()))
        meta['bias_expectation'] = series.expectation.value
        meta['bias_expectation_stderr'] = series.expectation.stderr
        meta['bias_expectation_exact'] = series.expectation.exact
    else:
        stats = run_ensemble(h, cfg, psi0, options.ensembles, times,
                             options.workers)

    write_ensemble_csv(os.path.join(out, 'ensemble.csv'), stats)
    meta['fidelity_max_dev'] = float(np.max(stats.fidelity_max_dev))
    write_metadata(os.path.join(out, METADATA_FILE), meta)
    logger.info('t=%r: mse=%r +- %r', float(stats.times[-1]),
                float(stats.mse[-1]), float(stats.mse_stderr[-1]))


def cmd_sweep_dt(options: Namespace, argv: Sequence[Text]) -> None:
    if options.gates is not None:
        raise ValidationError('sweep-dt takes --dt, not --gates')
    if options.points < 1:
        raise ValidationError(
            f'--points must be at least 1 (got {options.points})')
    if options.dt is None:
        options.dt = DEFAULT_SWEEP_DT
    h = load_model(options)
    psi0 = initial_state(h, options)
    base = scheme_config(h, options, psi0)
    at_time = base.t_final if options.at_time is None else options.at_time
    out = _prepare_out(options.out)
    times = even_record_times(base.t_final, options.records) + [at_time]

    rows = []
    for i in range(options.points):
        cfg = dataclasses.replace(base, dt=base.dt / 2 ** i)
        stats = run_ensemble(h, cfg, psi0, options.ensembles, times,
                             options.workers)
        write_ensemble_csv(os.path.join(out, f'dt_{i}.csv'), stats)
        j = int(np.argmin(np.abs(stats.times - at_time)))
        rows.append((stats.dt, float(stats.times[j]), float(stats.mse[j]),
                     float(stats.mse_stderr[j]),
                     float(stats.fidelity_err[j]), float(stats.bias_sq[j]),
                     int(stats.gate_count[j])))
        logger.info('dt=%r: mse=%r at t=%r', stats.dt, rows[-1][2],
                    rows[-1][1])
    write_table_csv(os.path.join(out, 'mse_vs_dt.csv'), MSE_VS_DT_COLUMNS,
                    rows)

    slope = None
    try:
        slope = fit_loglog_slope([r[0] for r in rows], [r[2] for r in rows])
        logger.info('log-log slope of mse against dt: %r', slope)
    except ValidationError as e:
        logger.warning('no slope fitted: %s', e)

    meta = run_metadata(options, argv, h, base, psi0)
    meta.update({
        'sweep': 'dt',
        'sweep_points': options.points,
        'at_time': at_time,
        'mse_dt_slope': slope,
    })
    write_metadata(os.path.join(out, METADATA_FILE), meta)


def cmd_sweep_nd(options: Namespace, argv: Sequence[Text]) -> None:
    if options.gates is None:
        raise ValidationError('sweep-nd needs a gate budget (--gates)')
    if not Scheme.from_flag(options.scheme).is_hybrid:
        raise ValidationError(
            f'sweep-nd needs a hybrid scheme (got {options.scheme})')
    h = load_model(options)
    psi0 = initial_state(h, options)
    mode = SamplerMode.from_flag(options.sampler)
    out = _prepare_out(options.out)
    times = even_record_times(options.t_final, options.records)

    rows = []
    points = []
    for n_d in nd_grid(h.n_terms, options.nd_stride):
        cfg = scheme_config(h, options, psi0, n_d=n_d)
        stats = run_ensemble(h, cfg, psi0, options.ensembles, times,
                             options.workers)
        write_ensemble_csv(os.path.join(out, f'nd_{n_d}.csv'), stats)
        point = estimator_point(h, n_d, mode, options.k, cfg.t_final,
                                options.gates, _include_h0_splitting(cfg),
                                psi0, cfg.scheme, cfg.u0_mode)
        points.append(point)
        rows.append((n_d, point.k, stats.dt, stats.plan.n_steps,
                     int(stats.gate_count[-1]), float(stats.times[-1]),
                     float(stats.mse[-1]), float(stats.mse_stderr[-1]),
                     float(stats.fidelity_err[-1]),
                     float(stats.bias_sq[-1]), point.Lambda, point.Gamma,
                     point.comm_norm, point.C, point.variance, point.bias,
                     point.total))
        logger.info('n_d=%d: mse=%r estimate=%r', n_d, rows[-1][6],
                    point.total)
    write_table_csv(os.path.join(out, 'mse_vs_nd.csv'), MSE_VS_ND_COLUMNS,
                    rows)

    # np.argmin returns the first minimum, so ties go to the smaller n_d.
    empirical = rows[int(np.argmin([r[6] for r in rows]))][0]
    estimated = argmin_nd(points)
    logger.info('best n_d: empirical %d, estimator %d', empirical, estimated)

    meta = run_metadata(options, argv, h, scheme_config(h, options, psi0),
                        psi0)
    meta.update({
        'sweep': 'n_d',
        'nd_stride': options.nd_stride,
        'nd_grid': ' '.join(str(r[0]) for r in rows),
        'empirical_argmin_nd': empirical,
        'estimator_argmin_nd': estimated,
    })
    write_metadata(os.path.join(out, METADATA_FILE), meta)


def cmd_bounds(options: Namespace, argv: Sequence[Text]) -> None:
    h = load_model(options)
    psi0 = initial_state(h, options) if _needs_state(options) else None
    cfg = scheme_config(h, options, psi0, require_step=False)
    plan = cfg.plan(h.n_terms)
    n_d = _constants_n_d(h, cfg)
    n_r = h.n_terms - n_d
    c = partition_constants(h, n_d, cfg.sampler.mode,
                            cfg.sampler.batch_size,
                            _include_h0_splitting(cfg), psi0)

    expectation = None
    if options.bias and n_r:
        e = bias_expectation(list(h.with_n_d(n_d).h1_terms), cfg.sampler,
                             seed=cfg.base_seed)
        expectation = e.value

    t = cfg.t_final if options.at_time is None else options.at_time
    report = BoundReport.build(
        c.Lambda, c.Gamma, c.comm_norm, c.C, t, plan.dt, max(c.k, 1), n_d,
        n_r, options.eps, options.delta, cfg.t_final, cfg.gate_budget,
        cfg.sampler.mode, c.gamma_is_bound, expectation,
        step_cost=cfg.step_cost(h.n_terms))

    items = report.as_dict()
    # Gate counts are asymptotic; the implied constant is taken as 1.
    items['gate_count_constant'] = 1
    for key, value in items.items():
        print(f'{key} = {value}')
    if options.out:
        out = _prepare_out(options.out)
        write_metadata(os.path.join(out, 'bounds.txt'), items)


def cmd_replay(options: Namespace, argv: Sequence[Text]) -> None:
    """
    Re-parses the recorded command line with a new output directory.

    :raises ValidationError: If the Hamiltonian file changed since the run.
    """
    meta = read_metadata(os.path.join(options.source, METADATA_FILE))
    if 'argv' not in meta:
        raise ValidationError(f'{options.source}: no recorded command line')
    replayed = shlex.split(meta['argv'])
    if replayed and replayed[0] == 'replay':
        raise ValidationError('Cannot replay a replay record')
    if os.path.abspath(options.out) == os.path.abspath(options.source):
        raise ValidationError('Replay output must not overwrite the source')

    inner = build_parser().parse_args(replayed + ['--out', options.out])
    digest = meta.get('hamiltonian_sha256')
    if digest is not None and file_digest(inner.hamiltonian) != digest:
        raise ValidationError(
            f'{inner.hamiltonian} changed since the recorded run')
    logger.info('replaying: hybtrot %s', meta['argv'])
    inner.handler(inner, replayed + ['--out', options.out])


def configure_logging(options: Namespace) -> None:
    global_logger = logging.getLogger('hybtrot')
    global_logger.setLevel(options.verbosity)
    logging.basicConfig(level=options.verbosity, filename=options.log)


def main(argv: Optional[List[Text]] = None) -> int:
    """
    Entry point. Returns the process exit code: 0 on success, 2 for invalid
    input, 3 for a numerical failure.
    """
    if argv is None:
        argv = sys.argv[1:]
    options = build_parser().parse_args(argv)
    configure_logging(options)

    try:
        options.handler(options, argv)
    except NumericalError as e:
        logger.error('numerical failure: %s', e)
        return EXIT_NUMERICAL
    except ValidationError as e:
        logger.error('%s', e)
        return EXIT_VALIDATION
    except OSError as e:
        logger.error('%s', e)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
