#!/usr/bin/env python
# hybtrot/analysis/ensemble.py - Ensemble error statistics
# Copyright 2026 the hybtrot authors
#
# This library is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This library is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this library.  If not, see <http://www.gnu.org/licenses/>.
"""
Ensembles of independent trajectories compared against exact evolution.

For every recorded time the ensemble reports the mean square error
E||psi - phi||^2, the fidelity error E[1 - Re <psi|phi>], and the squared
bias ||psi - E[phi]||^2 of the ensemble mean.

Trajectories may run in a process pool. Results are always merged in
trajectory order, so the statistics do not depend on the worker count.
"""

from __future__ import absolute_import
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import logging
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from hybtrot.analysis.bounds import (
    BiasExpectation, bias_bound, bias_expectation)
from hybtrot.common import (
    DEFAULT_ENSEMBLES, FIDELITY_IDENTITY_TOLERANCE, MONTE_CARLO_DRAWS,
    NumericalError, ValidationError)
from hybtrot.evolve import StateVector
from hybtrot.hamiltonian import (
    PartitionedHamiltonian, commutator_norm, partition)
from hybtrot.pauli import TermSum
from hybtrot.scheme import (
    SchemeConfig, StepPlan, run_reference, run_trajectory, snap_times)

__all__ = [
    'RunningMoments',
    'EnsembleStats',
    'BiasSeries',
    'run_ensemble',
    'bias_of_mean',
    'fit_loglog_slope',
]

logger = logging.getLogger(__name__)


class RunningMoments:
    """
    Streaming mean and sum of squared deviations of an array-valued sample.

    Two accumulators can be merged; merging is associative.
    """

    def __init__(self, shape: Tuple[int, ...] = ()):
        self.count = 0
        self.mean = np.zeros(shape)
        self.m2 = np.zeros(shape)

    @classmethod
    def of(cls, sample: np.ndarray) -> RunningMoments:
        out = cls(np.shape(sample))
        out.count = 1
        out.mean = np.array(sample, dtype=np.float64)
        return out

    def merge(self, other: RunningMoments) -> RunningMoments:
        if other.count == 0:
            return self
        if self.count == 0:
            self.count = other.count
            self.mean = other.mean.copy()
            self.m2 = other.m2.copy()
            return self
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean = self.mean + delta * (other.count / total)
        self.m2 = (self.m2 + other.m2 +
                   delta ** 2 * (self.count * other.count / total))
        self.count = total
        return self

    def add(self, sample: np.ndarray) -> RunningMoments:
        return self.merge(RunningMoments.of(sample))

    @property
    def variance(self) -> np.ndarray:
        """Unbiased sample variance."""
        if self.count < 2:
            raise ValidationError('Variance needs at least two samples')
        return self.m2 / (self.count - 1)

    @property
    def stderr(self) -> np.ndarray:
        return np.sqrt(self.variance / self.count)


@dataclass
class EnsembleStats:
    times: np.ndarray
    mse: np.ndarray
    mse_stderr: np.ndarray
    fidelity_err: np.ndarray
    fidelity_stderr: np.ndarray
    # max over trajectories of |f - mean f|
    fidelity_max_dev: np.ndarray
    bias_sq: np.ndarray
    gate_count: np.ndarray
    n_ensembles: int
    plan: StepPlan

    @property
    def dt(self) -> float:
        return self.plan.dt

    def rows(self) -> Iterable[Tuple[float, float, float, float, float, int]]:
        """One (time, mse, mse_stderr, fidelity_err, bias_sq, gates) row per
        recorded time."""
        for i in range(len(self.times)):
            yield (float(self.times[i]), float(self.mse[i]),
                   float(self.mse_stderr[i]), float(self.fidelity_err[i]),
                   float(self.bias_sq[i]), int(self.gate_count[i]))


@dataclass(frozen=True)
class _MemberResult:
    sq_err: np.ndarray
    fid_err: np.ndarray
    states: np.ndarray
    gate_count: np.ndarray


@dataclass(frozen=True)
class _Member:
    """Runs trajectory ``index`` and compares it to the reference."""
    h: PartitionedHamiltonian
    cfg: SchemeConfig
    psi0: StateVector
    times: Tuple[float, ...]
    reference: np.ndarray

    def __call__(self, index: int) -> _MemberResult:
        traj = run_trajectory(self.h, self.cfg, self.psi0, self.times,
                              trajectory_index=index)
        states = np.array(traj.states())
        diff = self.reference - states
        sq_err = np.einsum('ij,ij->i', diff.conj(), diff).real
        fid_err = 1. - np.einsum('ij,ij->i', self.reference.conj(),
                                 states).real
        gap = np.max(np.abs(sq_err - 2 * fid_err))
        if gap > FIDELITY_IDENTITY_TOLERANCE:
            raise NumericalError(
                f'Trajectory {index}: ||e||^2 and 2f differ by {gap:.3e}')
        return _MemberResult(sq_err, fid_err, states,
                             np.array(traj.gate_counts))


def run_ensemble(h: PartitionedHamiltonian, cfg: SchemeConfig,
                 psi0: StateVector, n_ensembles: int = DEFAULT_ENSEMBLES,
                 record_times: Optional[Sequence[float]] = None,
                 workers: int = 1) -> EnsembleStats:
    """
    Runs ``n_ensembles`` trajectories and aggregates their errors.

    Trajectory i draws from ``trajectory_rng(cfg.base_seed, i)``. The
    reference is exact evolution at the snapped record times.

    :param record_times: Requested times; snapped to the nearest step. None
                         records every step.
    :param workers: Process pool size; 1 runs in this process.
    :raises ValidationError: If fewer than two trajectories are requested.
    """
    if n_ensembles < 2:
        raise ValidationError(
            f'An ensemble needs at least 2 members (got {n_ensembles})')
    plan = cfg.plan(h.n_terms)
    steps = snap_times(record_times, plan.dt, plan.n_steps)
    times = tuple(n * plan.dt for n in steps)
    reference = np.array(run_reference(h, psi0, times).states())

    member = _Member(h, cfg, psi0, times, reference)
    mse = RunningMoments((len(times),))
    fid = RunningMoments((len(times),))
    phi_sum = np.zeros_like(reference)
    fid_all = []
    gate_count = None

    def _collect(results):
        nonlocal phi_sum, gate_count
        for index, result in enumerate(results):
            mse.add(result.sq_err)
            fid.add(result.fid_err)
            phi_sum = phi_sum + result.states
            fid_all.append(result.fid_err)
            gate_count = result.gate_count
            logger.info('trajectory %d/%d done', index + 1, n_ensembles)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            _collect(pool.map(member, range(n_ensembles)))
    else:
        _collect(member(i) for i in range(n_ensembles))

    mean_phi = phi_sum / n_ensembles
    bias_diff = reference - mean_phi
    bias_sq = np.einsum('ij,ij->i', bias_diff.conj(), bias_diff).real
    max_dev = np.max(np.abs(np.array(fid_all) - fid.mean), axis=0)

    return EnsembleStats(
        times=np.array(times), mse=mse.mean, mse_stderr=mse.stderr,
        fidelity_err=fid.mean, fidelity_stderr=fid.stderr,
        fidelity_max_dev=max_dev, bias_sq=bias_sq, gate_count=gate_count,
        n_ensembles=n_ensembles, plan=plan)


@dataclass
class BiasSeries:
    times: np.ndarray
    # ||psi - mean(phi)||
    bias: np.ndarray
    bound: np.ndarray
    comm_norm: float
    expectation: BiasExpectation
    stats: EnsembleStats


def bias_of_mean(h: PartitionedHamiltonian, cfg: SchemeConfig,
                 psi0: StateVector, n_ensembles: int = DEFAULT_ENSEMBLES,
                 record_times: Optional[Sequence[float]] = None,
                 workers: int = 1, draws: int = MONTE_CARLO_DRAWS
                 ) -> BiasSeries:
    """
    Error of the ensemble mean against the exact state, with its bound::

        t dt / 2 (||[H0, H1]|| + E[||(H1 + dH) dH^2 (H1 + dH)||]^(1/2))
    """
    stats = run_ensemble(h, cfg, psi0, n_ensembles, record_times, workers)
    n_d = cfg.n_d if cfg.scheme.is_hybrid else h.n_terms
    h0, h1 = partition(h, n_d)
    comm = commutator_norm(h0, TermSum.from_terms(h.n_qubits, h1))
    if h1:
        expectation = bias_expectation(h1, cfg.sampler, draws=draws,
                                       seed=cfg.base_seed)
    else:
        expectation = BiasExpectation(0., 0., True, 0)
    bound = np.array([bias_bound(comm, expectation.value, t, stats.dt)
                      for t in stats.times])
    return BiasSeries(stats.times, np.sqrt(stats.bias_sq), bound, comm,
                      expectation, stats)


def fit_loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Least squares slope of log(y) against log(x).

    :raises ValidationError: With fewer than two points or non-positive data.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or len(x) < 2:
        raise ValidationError('A slope fit needs two or more (x, y) pairs')
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValidationError('A log-log fit needs positive data')
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)
