#!/usr/bin/env python
# hybtrot/analysis/bounds.py - Closed-form error bounds and gate counts
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
Closed-form error bounds for hybrid splitting, and the gate counts they imply.

Every gate count here is an asymptotic O(.) expression evaluated with an
implied constant of 1.

Symbols: Lambda and Gamma come from
:func:`hybtrot.sampling.delta_h_constants`, ``comm_norm`` is ||[H0, H1]|| from
:func:`hybtrot.hamiltonian.commutator_norm`, and C from
:func:`hybtrot.hamiltonian.bch_constant`.
"""

from __future__ import absolute_import
from __future__ import annotations

from dataclasses import asdict, dataclass
import logging
import math
from typing import Dict, Optional, Sequence, Text

import numpy as np

from hybtrot.common import (
    MAX_ENUMERATED_OUTCOMES, MONTE_CARLO_DRAWS, SamplerMode, ValidationError,
    check_nonnegative, check_positive, check_unit_interval)
from hybtrot.analysis.estimator import error_estimator
from hybtrot.pauli import HamiltonianTerm, TermSum, spectral_norm, to_dense
from hybtrot.sampling import (
    SamplerSpec, delta_h_operator, enumerate_outcomes,
    outcome_count, sample_batch, trajectory_rng)

__all__ = [
    'BoundReport',
    'BiasExpectation',
    'one_step_mse_bound',
    'one_step_as_bound',
    'one_step_variance_bound',
    'splitting_error_bound',
    'multi_splitting_constant',
    'multi_splitting_bound',
    'global_mse_bound',
    'bias_expectation',
    'bias_bound',
    'gate_count_markov',
    'gate_count_mcdiarmid',
]

logger = logging.getLogger(__name__)


def one_step_mse_bound(Lambda: float, comm_norm: float, dt: float,
                       K: int = 1) -> float:
    """One step mean square error: 2 Lambda dt^2 / K + dt^4 comm^2."""
    check_nonnegative('Lambda', Lambda)
    check_nonnegative('comm_norm', comm_norm)
    check_nonnegative('dt', dt)
    if K < 1:
        raise ValidationError(f'K must be at least 1 (got {K})')
    return 2 * Lambda * dt ** 2 / K + dt ** 4 * comm_norm ** 2


def one_step_as_bound(Gamma: float, comm_norm: float, dt: float) -> float:
    """Almost sure one step error norm: dt Gamma + dt^2/2 comm."""
    check_nonnegative('Gamma', Gamma)
    check_nonnegative('comm_norm', comm_norm)
    check_nonnegative('dt', dt)
    return dt * Gamma + dt ** 2 / 2 * comm_norm


def one_step_variance_bound(Lambda: float, dt: float, K: int = 1) -> float:
    """Mean square error of a purely random step with no splitting."""
    check_nonnegative('Lambda', Lambda)
    check_nonnegative('dt', dt)
    if K < 1:
        raise ValidationError(f'K must be at least 1 (got {K})')
    return Lambda * dt ** 2 / K


def splitting_error_bound(comm_norm: float, dt: float) -> float:
    """Error norm of one first order step of exp(-i dt (H0 + H1))."""
    check_nonnegative('comm_norm', comm_norm)
    check_nonnegative('dt', dt)
    return dt ** 2 / 2 * comm_norm


def multi_splitting_constant(terms: Sequence[HamiltonianTerm]) -> float:
    """
    C = max over pairs j < k of ||[h_j, h_k]|| / 4, for splitting a product
    of several exponentials.
    """
    best = 0.
    n = len(terms)
    for j in range(n):
        for k in range(j + 1, n):
            a = TermSum.from_terms(terms[j].n_qubits, [terms[j]])
            b = TermSum.from_terms(terms[k].n_qubits, [terms[k]])
            c = a.commutator(b)
            if c:
                best = max(best, spectral_norm(c))
    return best / 4


def multi_splitting_bound(terms: Sequence[HamiltonianTerm],
                          dt: float) -> float:
    """C K^2 dt^2 for a product of K = len(terms) exponentials."""
    check_nonnegative('dt', dt)
    return multi_splitting_constant(terms) * len(terms) ** 2 * dt ** 2


def global_mse_bound(Lambda: float, Gamma: float, comm_norm: float, t: float,
                     dt: float, K: int, n_r: int) -> float:
    """
    Mean square error at time t::

        (2 Lambda t dt / K + comm t dt^3)
            * exp(((n_r - K) / n_r) Gamma t + t dt comm / 2)

    :raises ValidationError: If K is outside [1, n_r].
    """
    if n_r < 1 or not 1 <= K <= n_r:
        raise ValidationError(f'K must be in [1, n_r] (got K={K}, n_r={n_r})')
    for name, value in (('Lambda', Lambda), ('Gamma', Gamma),
                        ('comm_norm', comm_norm), ('t', t), ('dt', dt)):
        check_nonnegative(name, value)
    prefactor = 2 * Lambda * t * dt / K + comm_norm * t * dt ** 3
    if prefactor == 0:
        return 0.
    growth = (n_r - K) / n_r * Gamma * t + t * dt * comm_norm / 2
    return prefactor * math.exp(growth)


@dataclass(frozen=True)
class BiasExpectation:
    """E[||(H1 + dH) dH^2 (H1 + dH)||] and how it was obtained."""
    value: float
    stderr: float
    exact: bool
    outcomes: int


def _bias_norm(h1_dense: np.ndarray, dh: TermSum) -> float:
    d = to_dense(dh)
    a = h1_dense + d
    m = a @ d @ d @ a
    # Hermitian positive semidefinite.
    return float(np.max(np.abs(np.linalg.eigvalsh(m))))


def bias_expectation(h1: Sequence[HamiltonianTerm], spec: SamplerSpec,
                     draws: int = MONTE_CARLO_DRAWS,
                     seed: int = 0,
                     max_outcomes: int = MAX_ENUMERATED_OUTCOMES
                     ) -> BiasExpectation:
    """
    E[||(H1 + dH) dH^2 (H1 + dH)||] over the sampler's draws.

    The expectation is exact when the sampler has at most ``max_outcomes``
    outcomes, otherwise a Monte Carlo estimate over ``draws`` draws with its
    standard error.
    """
    if not h1:
        return BiasExpectation(0., 0., True, 0)
    n_r = len(h1)
    h1_dense = to_dense(TermSum.from_terms(h1[0].n_qubits, h1))
    count = outcome_count(spec, n_r)

    if count <= max_outcomes:
        parts = [p * _bias_norm(h1_dense, delta_h_operator(h1, draw))
                 for p, draw in enumerate_outcomes(spec, n_r)]
        return BiasExpectation(math.fsum(parts), 0., True, count)

    logger.info('%d sampler outcomes, estimating the bias expectation from '
                '%d draws', count, draws)
    rng = trajectory_rng(seed, 0)
    samples = np.array([
        _bias_norm(h1_dense, delta_h_operator(h1, sample_batch(spec, n_r,
                                                               rng)))
        for _ in range(draws)])
    return BiasExpectation(float(samples.mean()),
                           float(samples.std(ddof=1) / math.sqrt(draws)),
                           False, count)


def bias_bound(comm_norm: float, expectation: float, t: float,
               dt: float) -> float:
    """
    Bound on ||psi(t) - E[phi(t)]||::

        t dt / 2 * (comm + expectation^(1/2))
    """
    for name, value in (('comm_norm', comm_norm), ('expectation',
                                                   expectation), ('t', t),
                        ('dt', dt)):
        check_nonnegative(name, value)
    return t * dt / 2 * (comm_norm + math.sqrt(expectation))


def _check_eps_delta(eps: float, delta: float, delta_closed: bool) -> None:
    check_unit_interval('eps', eps)
    check_unit_interval('delta', delta, closed_above=delta_closed)


def gate_count_markov(Lambda: float, comm_norm: float, n_d: int, t: float,
                      eps: float, delta: float) -> float:
    """
    Gates for P(||e|| < eps) >= 1 - delta through Markov's inequality::

        max{(n_d + 1) Lambda t^2 / (eps^2 delta),
            (n_d + 1) (2 t^4 comm / (eps^2 delta))^(1/3)}
    """
    _check_eps_delta(eps, delta, False)
    check_nonnegative('Lambda', Lambda)
    check_nonnegative('comm_norm', comm_norm)
    check_nonnegative('t', t)
    scale = eps ** 2 * delta
    variance = (n_d + 1) * Lambda * t ** 2 / scale
    splitting = (n_d + 1) * (2 * t ** 4 * comm_norm / scale) ** (1. / 3)
    return max(variance, splitting)


def gate_count_mcdiarmid(value: float, n_d: int, t: float, eps: float,
                         delta: float,
                         mode: SamplerMode = SamplerMode.IMPORTANCE) -> float:
    """
    Gates for concentration of the fidelity error within eps, with
    probability 1 - delta, from McDiarmid's inequality.

    :param value: Lambda for importance sampling, Gamma for uniform sampling.
    :returns: -(n_d + 1) ln(delta) t^2 Lambda / (4 eps^2) (importance) or
              -(n_d + 1) ln(delta) t^2 Gamma^2 / eps^2 (uniform).
    """
    _check_eps_delta(eps, delta, True)
    check_nonnegative('value', value)
    check_nonnegative('t', t)
    log_delta = math.log(delta)
    if mode == SamplerMode.UNIFORM_BATCH:
        count = -(n_d + 1) * log_delta * t ** 2 * value ** 2 / eps ** 2
    else:
        count = -(n_d + 1) * log_delta * t ** 2 * value / (4 * eps ** 2)
    return max(count, 0.)


@dataclass(frozen=True)
class BoundReport:
    """Inputs and every closed-form output for one configuration."""
    # inputs
    Lambda: float
    Gamma: float
    comm_norm: float
    C: float
    t: float
    dt: float
    K: int
    n_d: int
    n_r: int
    eps: float
    delta: float
    t_final: float
    gate_budget: Optional[int]
    sampler: Text
    gamma_is_bound: bool = False
    # outputs
    one_step_mse: float = 0.
    one_step_as: float = 0.
    global_mse: float = 0.
    bias: Optional[float] = None
    estimator: Optional[float] = None
    gates_markov: float = 0.
    gates_mcdiarmid: float = 0.

    @classmethod
    def build(cls, Lambda: float, Gamma: float, comm_norm: float, C: float,
              t: float, dt: float, K: int, n_d: int, n_r: int, eps: float,
              delta: float, t_final: float, gate_budget: Optional[int] = None,
              sampler: SamplerMode = SamplerMode.IMPORTANCE,
              gamma_is_bound: bool = False,
              bias_expectation_value: Optional[float] = None,
              step_cost: Optional[int] = None) -> BoundReport:
        """
        Evaluates every bound for the given constants.

        :param step_cost: Gates per step for the estimator; defaults to
                          n_d + K.
        """
        check_positive('t', t)
        k_eff = K if n_r else 0
        if n_r:
            global_mse = global_mse_bound(Lambda, Gamma, comm_norm, t, dt, K,
                                          n_r)
        else:
            global_mse = 0.
        bias = None
        if bias_expectation_value is not None:
            bias = bias_bound(comm_norm, bias_expectation_value, t, dt)
        estimator = None
        if gate_budget:
            estimator = error_estimator(Lambda, C, n_d, k_eff, t_final,
                                        gate_budget, step_cost).total
        mcd_value = Gamma if sampler == SamplerMode.UNIFORM_BATCH else Lambda
        return cls(
            Lambda, Gamma, comm_norm, C, t, dt, K, n_d, n_r, eps, delta,
            t_final, gate_budget, sampler.flag, gamma_is_bound,
            one_step_mse=one_step_mse_bound(Lambda, comm_norm, dt, K),
            one_step_as=one_step_as_bound(Gamma, comm_norm, dt),
            global_mse=global_mse,
            bias=bias,
            estimator=estimator,
            gates_markov=gate_count_markov(Lambda, comm_norm, n_d, t, eps,
                                           delta),
            gates_mcdiarmid=gate_count_mcdiarmid(mcd_value, n_d, t, eps,
                                                 delta, sampler),
        )

    def as_dict(self) -> Dict[Text, object]:
        return asdict(self)
