#!/usr/bin/env python
# hybtrot/scheme.py - Deterministic, random and hybrid evolution schemes
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
Evolution schemes and trajectories.

A hybrid step evolves the n_d largest terms (H0) deterministically through
U0 and replaces the remaining terms (H1) with a random batch::

    first order:  U0(dt) . prod_{l in S} exp(-i dt w_l h_l)
    symmetric:    prod_{l in S, ascending} exp(-i dt/2 w_l h_l) . U0(dt)
                  . prod_{l in S, descending} exp(-i dt/2 w_l h_l)

Random factors are applied to the state in ascending index order (first
order), or descending then ascending around U0 (symmetric).

Every single-term exponential is one gate. An exactly evaluated U0 is charged
n_d gates, the price of splitting it to first order.
"""

from __future__ import absolute_import
from __future__ import annotations

from dataclasses import dataclass, field
import logging
import math
from typing import Iterable, List, NamedTuple, Optional, Sequence, Text

import numpy as np

from hybtrot.common import (
    HORIZON_TOLERANCE, NumericalError, SamplerMode, Scheme, U0Mode,
    ValidationError, check_positive, check_same_qubits)
from hybtrot.evolve import (
    ExactPropagator, StateVector, apply_pauli_rotation,
    build_exact_propagator, trotter_step_first_order, trotter_step_symmetric)
from hybtrot.hamiltonian import PartitionedHamiltonian
from hybtrot.pauli import HamiltonianTerm, TermSum
from hybtrot.sampling import SamplerSpec, sample_batch, trajectory_rng

__all__ = [
    'SchemeConfig',
    'StepPlan',
    'U0Step',
    'Trajectory',
    'TrajectoryRecord',
    'hybrid_step_cost',
    'make_sampler',
    'snap_times',
    'even_record_times',
    'step_hybrid_first',
    'step_hybrid_symmetric',
    'run_trajectory',
    'run_reference',
]

logger = logging.getLogger(__name__)


class StepPlan(NamedTuple):
    """Resolved step control for a horizon."""
    dt: float
    n_steps: int
    step_cost: int
    # t_final - n_steps * dt
    residual: float

    @property
    def gate_count(self) -> int:
        return self.n_steps * self.step_cost


def hybrid_step_cost(scheme: Scheme, u0_mode: U0Mode, n_d: int,
                     k: int) -> int:
    """
    Gate units for one hybrid step with K = ``k`` factors drawn from H1 and
    U0 over ``n_d`` terms. ``k`` is 0 when H1 is empty.
    """
    u0 = u0_mode.gate_cost(n_d)
    if scheme.is_symmetric:
        return 2 * k + u0
    return k + u0


@dataclass(frozen=True)
class SchemeConfig:
    """
    A complete description of one experiment's time stepping.

    Exactly one of ``dt`` and ``gate_budget`` must be given. With a gate
    budget, dt = step_cost * t_final / gate_budget.

    Deterministic schemes split every term, so ``n_d``, ``sampler`` and
    ``u0_mode`` only matter to the hybrid schemes.
    """
    scheme: Scheme
    n_d: int = 0
    sampler: SamplerSpec = field(default_factory=SamplerSpec.uniform)
    u0_mode: U0Mode = U0Mode.EXACT
    t_final: float = 1.
    dt: Optional[float] = None
    gate_budget: Optional[int] = None
    base_seed: int = 0

    def __post_init__(self):
        check_positive('t_final', self.t_final)
        if (self.dt is None) == (self.gate_budget is None):
            raise ValidationError(
                'Exactly one of dt and gate_budget must be given')
        if self.dt is not None:
            check_positive('dt', self.dt)
        else:
            if self.gate_budget < 1:
                raise ValidationError(
                    f'Gate budget must be positive (got {self.gate_budget})')
        if self.n_d < 0:
            raise ValidationError(f'n_d must not be negative (got {self.n_d})')

    def effective_batch(self, n_terms: int) -> int:
        return self.sampler.effective_batch(n_terms - self.n_d)

    def step_cost(self, n_terms: int) -> int:
        """Gate units consumed by one step on an L-term Hamiltonian."""
        if self.scheme == Scheme.DETERMINISTIC_FIRST:
            return n_terms
        if self.scheme == Scheme.DETERMINISTIC_SYMMETRIC:
            return 2 * n_terms - 1
        if self.n_d > n_terms:
            raise ValidationError(
                f'n_d = {self.n_d} exceeds the {n_terms} terms')
        return hybrid_step_cost(self.scheme, self.u0_mode, self.n_d,
                                self.effective_batch(n_terms))

    def plan(self, n_terms: int) -> StepPlan:
        """
        Resolves dt and the number of steps.

        If dt does not divide the horizon the run is truncated at the last
        full step and the residual is reported.
        """
        cost = self.step_cost(n_terms)
        if self.dt is not None:
            dt = self.dt
        else:
            dt = cost * self.t_final / self.gate_budget

        ratio = self.t_final / dt
        n_steps = int(round(ratio))
        if abs(ratio - n_steps) > HORIZON_TOLERANCE * ratio:
            n_steps = int(math.floor(ratio))
            logger.warning(
                'dt = %r does not divide t_final = %r; stopping after %d '
                'steps at t = %r', dt, self.t_final, n_steps, n_steps * dt)
        if n_steps < 1:
            raise ValidationError(
                f'dt = {dt!r} is longer than the horizon {self.t_final!r}')
        return StepPlan(dt, n_steps, cost, self.t_final - n_steps * dt)

    def describe(self) -> dict:
        """Flat key/value view used by result metadata."""
        return {
            'scheme': self.scheme.flag,
            'n_d': self.n_d,
            'sampler': self.sampler.mode.flag,
            'k': self.sampler.batch_size,
            'u0': self.u0_mode.flag,
            't_final': self.t_final,
            'dt': self.dt,
            'gate_budget': self.gate_budget,
            'seed': self.base_seed,
        }


def make_sampler(h: PartitionedHamiltonian, n_d: int, mode: SamplerMode,
                 batch_size: int = 1,
                 state: Optional[StateVector] = None) -> SamplerSpec:
    """
    Builds the sampler for the H1 of ``h`` cut at ``n_d``.

    A uniform batch larger than n_r is reduced to n_r. With nothing left to
    sample, a uniform placeholder is returned; it is never drawn from.
    """
    h1 = h.with_n_d(n_d).h1_terms
    if not h1:
        return SamplerSpec.uniform(batch_size if mode ==
                                   SamplerMode.UNIFORM_BATCH else 1)
    if mode == SamplerMode.UNIFORM_BATCH and batch_size > len(h1):
        logger.info('K = %d exceeds n_r = %d at n_d = %d, using K = n_r',
                    batch_size, len(h1), n_d)
        batch_size = len(h1)
    return SamplerSpec.for_terms(mode, h1, batch_size, state)


class U0Step:
    """
    exp(-i dt H0) inside a hybrid step, evaluated as configured.

    :param h0_terms: The H0 terms, largest first.
    """

    def __init__(self, n_qubits: int, h0_terms: Sequence[HamiltonianTerm],
                 mode: U0Mode = U0Mode.EXACT):
        self.n_qubits = n_qubits
        self.terms = tuple(h0_terms)
        self.mode = mode
        self.cost = mode.gate_cost(len(self.terms))
        self._propagator = None  # type: Optional[ExactPropagator]
        if mode == U0Mode.EXACT and self.terms:
            self._propagator = build_exact_propagator(
                TermSum.from_terms(n_qubits, self.terms))

    def apply(self, state: StateVector, dt: float) -> StateVector:
        if not self.terms:
            return state
        if self.mode == U0Mode.EXACT:
            self._propagator.apply(state, dt)
            state.gate_count += self.cost
        elif self.mode == U0Mode.SPLIT_FIRST:
            trotter_step_first_order(state, self.terms, dt)
        else:
            trotter_step_symmetric(state, self.terms, dt)
        return state


def step_hybrid_first(state: StateVector, u0: U0Step,
                      h1: Sequence[HamiltonianTerm], sampler: SamplerSpec,
                      dt: float, rng: np.random.Generator) -> StateVector:
    """
    One first-order hybrid step: U0(dt) times the sampled H1 factors in
    ascending index order. Read as an operator product like
    :func:`trotter_step_first_order`, so the highest selected index acts on
    the state first.
    """
    check_positive('dt', dt)
    if h1:
        draw = list(sample_batch(sampler, len(h1), rng))
        for index, weight in reversed(draw):
            apply_pauli_rotation(state, h1[index], dt * weight)
    return u0.apply(state, dt)


def step_hybrid_symmetric(state: StateVector, u0: U0Step,
                          h1: Sequence[HamiltonianTerm], sampler: SamplerSpec,
                          dt: float, rng: np.random.Generator) -> StateVector:
    """
    One symmetric hybrid step. A single draw is used for both half sweeps:
    ascending index order on the state, U0(dt), then descending. With H0
    empty and the whole of H1 drawn this is :func:`trotter_step_symmetric`.
    """
    check_positive('dt', dt)
    if not h1:
        return u0.apply(state, dt)
    draw = list(sample_batch(sampler, len(h1), rng))
    half = dt / 2.
    for index, weight in draw:
        apply_pauli_rotation(state, h1[index], half * weight)
    u0.apply(state, dt)
    for index, weight in reversed(draw):
        apply_pauli_rotation(state, h1[index], half * weight)
    return state


@dataclass
class TrajectoryRecord:
    step: int
    time: float
    gate_count: int
    amplitudes: Optional[np.ndarray] = None


@dataclass
class Trajectory:
    records: List[TrajectoryRecord]
    final_state: StateVector
    plan: Optional[StepPlan] = None

    @property
    def times(self) -> List[float]:
        return [r.time for r in self.records]

    @property
    def gate_counts(self) -> List[int]:
        return [r.gate_count for r in self.records]

    def states(self) -> List[np.ndarray]:
        return [r.amplitudes for r in self.records]


def snap_times(times: Optional[Iterable[float]], dt: float,
               n_steps: int) -> List[int]:
    """
    Maps requested times onto step indices (nearest step), sorted and
    without duplicates. None asks for every step.

    :raises ValidationError: If a time lies outside [0, n_steps * dt].
    """
    if times is None:
        return list(range(n_steps + 1))
    horizon = n_steps * dt
    steps = set()
    for t in times:
        if t < -HORIZON_TOLERANCE * max(horizon, 1.) or \
                t > horizon + HORIZON_TOLERANCE * max(horizon, 1.) + dt:
            raise ValidationError(
                f'Record time {t!r} is outside [0, {horizon!r}]')
        steps.add(min(max(int(round(t / dt)), 0), n_steps))
    return sorted(steps)


def even_record_times(t_final: float, count: int) -> List[float]:
    """``count`` evenly spaced times in (0, t_final], plus t = 0."""
    if count < 1:
        raise ValidationError(f'Need at least one record time (got {count})')
    return [0.] + [t_final * (i + 1) / count for i in range(count)]


def run_trajectory(h: PartitionedHamiltonian, cfg: SchemeConfig,
                   psi0: StateVector,
                   record_times: Optional[Iterable[float]] = None,
                   trajectory_index: int = 0,
                   keep_states: bool = True) -> Trajectory:
    """
    Runs one trajectory of ``cfg`` from ``psi0``.

    The random stream is ``trajectory_rng(cfg.base_seed, trajectory_index)``,
    so the same (cfg, index) always gives the same trajectory.

    :param record_times: Times to record; snapped to the nearest step.
    :param keep_states: Store the state at each record.
    :raises NumericalError: If a recorded state has lost its norm.
    """
    check_same_qubits(h.n_qubits, psi0.n_qubits)
    plan = cfg.plan(h.n_terms)
    wanted = set(snap_times(record_times, plan.dt, plan.n_steps))

    state = psi0.copy()
    state.gate_count = 0
    records = []  # type: List[TrajectoryRecord]

    if cfg.scheme.is_hybrid:
        hp = h.with_n_d(cfg.n_d)
        u0 = U0Step(h.n_qubits, hp.h0_terms, cfg.u0_mode)
        h1 = hp.h1_terms
        if h1:
            cfg.sampler.validate(len(h1))
        rng = trajectory_rng(cfg.base_seed, trajectory_index)
        if cfg.scheme.is_symmetric:
            def step(s):
                step_hybrid_symmetric(s, u0, h1, cfg.sampler, plan.dt, rng)
        else:
            def step(s):
                step_hybrid_first(s, u0, h1, cfg.sampler, plan.dt, rng)
    elif cfg.scheme.is_symmetric:
        def step(s):
            trotter_step_symmetric(s, h.terms, plan.dt)
    else:
        def step(s):
            trotter_step_first_order(s, h.terms, plan.dt)

    for n in range(plan.n_steps + 1):
        if n in wanted:
            state.check_norm()
            records.append(TrajectoryRecord(
                n, n * plan.dt, state.gate_count,
                state.amplitudes.copy() if keep_states else None))
        if n < plan.n_steps:
            step(state)
            logger.debug('step %d: gates=%d', n + 1, state.gate_count)

    if state.gate_count != plan.gate_count:
        raise NumericalError(
            f'Gate ledger mismatch: counted {state.gate_count}, expected '
            f'{plan.gate_count}')
    return Trajectory(records, state, plan)


def run_reference(h: PartitionedHamiltonian, psi0: StateVector,
                  record_times: Iterable[float]) -> Trajectory:
    """
    Exact evolution under the full Hamiltonian at the given times.

    :raises ValidationError: If the register is above the dense cap.
    """
    check_same_qubits(h.n_qubits, psi0.n_qubits)
    prop = build_exact_propagator(h.term_sum())
    records = []
    for n, t in enumerate(record_times):
        records.append(TrajectoryRecord(
            n, t, 0, prop.evolve(psi0.amplitudes, t)))
    if records:
        final = StateVector(h.n_qubits, records[-1].amplitudes)
    else:
        final = psi0.copy()
    return Trajectory(records, final)
