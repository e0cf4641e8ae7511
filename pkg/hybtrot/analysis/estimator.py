#!/usr/bin/env python
# hybtrot/analysis/estimator.py - Error estimator and partition search
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
Mean square error estimate at a fixed gate budget, and the choice of n_d that
minimises it.

With dt = c T / N_gate, where c is the gate cost of one step, the error at
time T is estimated as::

    Lambda(n_d) c T^2 / N_gate  +  C(n_d) c^3 T^4 / N_gate^3

The first addend is the sampling variance, the second the splitting bias.
For a first-order step with an exact U0, c = n_d + K.
"""

from __future__ import absolute_import
from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import List, NamedTuple, Optional

from hybtrot.common import (
    SamplerMode, Scheme, U0Mode, ValidationError, check_positive)
from hybtrot.evolve import StateVector
from hybtrot.hamiltonian import (
    PartitionedHamiltonian, bch_constant, commutator_norm, partition)
from hybtrot.pauli import TermSum
from hybtrot.sampling import delta_h_constants
from hybtrot.scheme import hybrid_step_cost, make_sampler

__all__ = [
    'ErrorEstimate',
    'EstimatorPoint',
    'PartitionConstants',
    'partition_constants',
    'estimator_point',
    'argmin_nd',
    'error_estimator',
    'nd_grid',
    'estimator_curve',
    'optimal_partition',
]

logger = logging.getLogger(__name__)


class ErrorEstimate(NamedTuple):
    variance: float
    bias: float

    @property
    def total(self) -> float:
        return self.variance + self.bias


def error_estimator(Lambda: float, C: float, n_d: int, K: int, t_final: float,
                    gate_budget: int,
                    step_cost: Optional[int] = None) -> ErrorEstimate:
    """
    Evaluates the estimator for one partition.

    :param step_cost: Gates per step; defaults to n_d + K.
    :raises ValidationError: If the gate budget is not positive.
    """
    if gate_budget <= 0:
        raise ValidationError(
            f'Gate budget must be positive (got {gate_budget})')
    check_positive('t_final', t_final)
    cost = n_d + K if step_cost is None else step_cost
    variance = Lambda * cost * t_final ** 2 / gate_budget
    bias = C * cost ** 3 * t_final ** 4 / gate_budget ** 3
    return ErrorEstimate(variance, bias)


def nd_grid(n_terms: int, stride: int) -> List[int]:
    """{0, stride, 2 stride, ...} up to and always including n_terms."""
    if stride < 1:
        raise ValidationError(f'Stride must be at least 1 (got {stride})')
    grid = list(range(0, n_terms + 1, stride))
    if grid[-1] != n_terms:
        grid.append(n_terms)
    return grid


@dataclass(frozen=True)
class PartitionConstants:
    """Lambda, Gamma, ||[H0, H1]|| and C for one cut of the Hamiltonian."""
    n_d: int
    k: int
    Lambda: float
    Gamma: float
    gamma_is_bound: bool
    comm_norm: float
    C: float


def partition_constants(h: PartitionedHamiltonian, n_d: int,
                        mode: SamplerMode, K: int,
                        include_h0_splitting: bool = True,
                        state: Optional[StateVector] = None
                        ) -> PartitionConstants:
    """
    Computes the sampling and splitting constants at ``n_d``. K is clamped
    to n_r for uniform batches; with H1 empty, K, Lambda and Gamma are 0.

    :param state: Required by state-adaptive sampling.
    """
    h0, h1 = partition(h, n_d)
    if h1:
        spec = make_sampler(h, n_d, mode, K, state)
        consts = delta_h_constants(h1, spec)
        k = spec.batch_size
        lam, gamma, bound = consts.lambda_, consts.gamma, consts.gamma_is_bound
    else:
        k, lam, gamma, bound = 0, 0., 0., False
    c = bch_constant(h, n_d, include_h0_splitting)
    comm = commutator_norm(h0, TermSum.from_terms(h.n_qubits, h1))
    return PartitionConstants(n_d, k, lam, gamma, bound, comm, c)


@dataclass(frozen=True)
class EstimatorPoint:
    n_d: int
    k: int
    Lambda: float
    Gamma: float
    comm_norm: float
    C: float
    variance: float
    bias: float

    @property
    def total(self) -> float:
        return self.variance + self.bias


def estimator_point(h: PartitionedHamiltonian, n_d: int, mode: SamplerMode,
                    K: int, t_final: float,
                    gate_budget: int,
                    include_h0_splitting: bool = True,
                    state: Optional[StateVector] = None,
                    scheme: Scheme = Scheme.HYBRID_FIRST,
                    u0_mode: U0Mode = U0Mode.EXACT) -> EstimatorPoint:
    """
    Computes the constants and the estimate for a single n_d. The step is
    charged as ``scheme`` with ``u0_mode`` would charge it.
    """
    c = partition_constants(h, n_d, mode, K, include_h0_splitting, state)
    cost = hybrid_step_cost(scheme, u0_mode, n_d, c.k)
    est = error_estimator(c.Lambda, c.C, n_d, c.k, t_final, gate_budget,
                          step_cost=cost)
    return EstimatorPoint(n_d, c.k, c.Lambda, c.Gamma, c.comm_norm, c.C,
                          est.variance, est.bias)


def estimator_curve(h: PartitionedHamiltonian, mode: SamplerMode, K: int,
                    t_final: float,
                    gate_budget: int, stride: int = 1,
                    include_h0_splitting: bool = True,
                    scheme: Scheme = Scheme.HYBRID_FIRST,
                    u0_mode: U0Mode = U0Mode.EXACT) -> List[EstimatorPoint]:
    """
    Evaluates the estimator over :func:`nd_grid`, recomputing Lambda and C
    at every point.
    """
    points = []
    for n_d in nd_grid(h.n_terms, stride):
        point = estimator_point(h, n_d, mode, K, t_final, gate_budget,
                                include_h0_splitting, scheme=scheme,
                                u0_mode=u0_mode)
        logger.info('n_d=%d: Lambda=%r C=%r estimate=%r', n_d, point.Lambda,
                    point.C, point.total)
        points.append(point)
    return points


def optimal_partition(h: PartitionedHamiltonian, mode: SamplerMode, K: int,
                      t_final: float,
                      gate_budget: int, stride: int = 1,
                      include_h0_splitting: bool = True,
                      scheme: Scheme = Scheme.HYBRID_FIRST,
                      u0_mode: U0Mode = U0Mode.EXACT) -> int:
    """
    :returns: The n_d on the grid with the smallest estimate; ties go to the
              smaller n_d.
    """
    curve = estimator_curve(h, mode, K, t_final, gate_budget, stride,
                            include_h0_splitting, scheme, u0_mode)
    return argmin_nd(curve)


def argmin_nd(curve: List[EstimatorPoint]) -> int:
    best = curve[0]
    for point in curve[1:]:
        if point.total < best.total:
            best = point
    return best.n_d
