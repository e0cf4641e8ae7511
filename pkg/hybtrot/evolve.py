#!/usr/bin/env python
# hybtrot/evolve.py - State vector kernels
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
State vectors and the kernels that evolve them.

Kernels work in place on a :class:`StateVector` and return it, so calls can be
chained. Every single-term exponential adds one unit to
:attr:`StateVector.gate_count`.
"""

from __future__ import absolute_import
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import logging
import math
from typing import Optional, Sequence, Text, Tuple, Union

import numpy as np
from scipy import linalg

from hybtrot.common import (
    DEFAULT_MODES, NORM_TOLERANCE, NumericalError, ValidationError,
    check_qubits, check_same_qubits)
from hybtrot.pauli import HamiltonianTerm, TermSum, pauli_action, to_dense

__all__ = [
    'StateVector',
    'ExactPropagator',
    'apply_pauli_rotation',
    'build_exact_propagator',
    'trotter_step_first_order',
    'trotter_step_symmetric',
    'ground_state',
    'eigenmode_superposition',
]

logger = logging.getLogger(__name__)


class StateVector:
    """
    A normalised state on n qubits, owned by a single trajectory.

    :param amplitudes: Complex amplitudes, length 2^n_qubits. The array is
                       copied.
    :raises ValidationError: If the length is wrong or the norm is not 1.
    """

    __slots__ = ('n_qubits', 'amplitudes', 'gate_count')

    def __init__(self, n_qubits: int, amplitudes: np.ndarray,
                 gate_count: int = 0):
        amplitudes = np.array(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << n_qubits,):
            raise ValidationError(
                f'{n_qubits} qubits needs {1 << n_qubits} amplitudes, got '
                f'shape {amplitudes.shape}')
        self.n_qubits = n_qubits
        self.amplitudes = amplitudes
        self.gate_count = gate_count
        drift = abs(self.norm() - 1.)
        if drift > NORM_TOLERANCE:
            raise ValidationError(f'State is not normalised (|norm - 1| = '
                                  f'{drift:.3e})')

    @classmethod
    def basis(cls, n_qubits: int, index: int = 0) -> StateVector:
        if not 0 <= index < (1 << n_qubits):
            raise ValidationError(
                f'Basis index {index} out of range for {n_qubits} qubits')
        amp = np.zeros(1 << n_qubits, dtype=np.complex128)
        amp[index] = 1.
        return cls(n_qubits, amp)

    @classmethod
    def normalized(cls, n_qubits: int, amplitudes: np.ndarray) -> StateVector:
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise ValidationError('Cannot normalise a zero vector')
        return cls(n_qubits, amplitudes / norm)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def check_norm(self, tol: float = NORM_TOLERANCE) -> None:
        """
        :raises NumericalError: If the norm has drifted away from 1.
        """
        drift = abs(self.norm() - 1.)
        if drift > tol:
            raise NumericalError(f'State norm drifted by {drift:.3e}')

    def copy(self) -> StateVector:
        out = StateVector.__new__(StateVector)
        out.n_qubits = self.n_qubits
        out.amplitudes = self.amplitudes.copy()
        out.gate_count = self.gate_count
        return out

    def overlap(self, other: StateVector) -> complex:
        """<self|other>"""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self):
        return (f'<StateVector n_qubits={self.n_qubits} '
                f'gate_count={self.gate_count}>')


def apply_pauli_rotation(state: StateVector, term: HamiltonianTerm,
                         theta: float) -> StateVector:
    """
    Applies exp(-i theta c P) for the term c P, in place.

    Since P^2 = I, this is cos(theta c) - i sin(theta c) P.
    """
    check_same_qubits(state.n_qubits, term.n_qubits)
    angle = theta * term.coeff
    perm, phases = pauli_action(term.pauli)
    amp = state.amplitudes
    state.amplitudes = (
        math.cos(angle) * amp - (1j * math.sin(angle)) * phases * amp[perm])
    state.gate_count += 1
    return state


@dataclass(frozen=True, eq=False)
class ExactPropagator:
    """
    exp(-i t H) for a fixed Hermitian H, from a cached eigendecomposition.

    An empty source is the identity for every t.
    """
    source: TermSum
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n_qubits(self) -> int:
        return self.source.n_qubits

    @property
    def is_identity(self) -> bool:
        return not self.source

    def evolve(self, amplitudes: np.ndarray, t: float) -> np.ndarray:
        """Returns exp(-i t H) v without touching v."""
        if self.is_identity or t == 0:
            return np.array(amplitudes, dtype=np.complex128)
        v = self.eigenvectors
        return v @ (np.exp(-1j * t * self.eigenvalues) *
                    (v.conj().T @ amplitudes))

    def apply(self, state: StateVector, t: float) -> StateVector:
        """Replaces the state with exp(-i t H) state. No gates are charged."""
        check_same_qubits(state.n_qubits, self.n_qubits)
        state.amplitudes = self.evolve(state.amplitudes, t)
        return state


@lru_cache(maxsize=4)
def _factorize(s: TermSum) -> Tuple[np.ndarray, np.ndarray]:
    logger.debug('diagonalising %r', s)
    w, v = linalg.eigh(to_dense(s))
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def build_exact_propagator(s: TermSum) -> ExactPropagator:
    """
    Factorises a Hermitian TermSum for repeated exact evolution.

    Factorisations are cached on the TermSum, so rebuilding a propagator for
    the same operator (eg: while sweeping dt) is free.

    :raises ValidationError: If s is not Hermitian or is above the dense cap.
    """
    check_qubits(s.n_qubits)
    if not s.is_hermitian():
        raise ValidationError('Exact propagation needs a Hermitian TermSum')
    if not s:
        empty = np.zeros(0)
        return ExactPropagator(s, empty, empty)
    w, v = _factorize(s)
    return ExactPropagator(s, w, v)


def trotter_step_first_order(state: StateVector,
                             terms: Sequence[HamiltonianTerm],
                             dt: float) -> StateVector:
    """
    One first-order splitting step over ``terms``.

    The list is read as an operator product, so the last listed term acts on
    the state first.
    """
    for term in reversed(terms):
        apply_pauli_rotation(state, term, dt)
    return state


def trotter_step_symmetric(state: StateVector,
                           terms: Sequence[HamiltonianTerm],
                           dt: float) -> StateVector:
    """
    One symmetric (Strang) step: half steps on every term but the last, a
    full step on the last, then the half steps again in reverse. Costs
    2m - 1 gates; an empty list is the identity.
    """
    if not terms:
        return state
    half = dt / 2.
    for term in terms[:-1]:
        apply_pauli_rotation(state, term, half)
    apply_pauli_rotation(state, terms[-1], dt)
    for term in reversed(terms[:-1]):
        apply_pauli_rotation(state, term, half)
    return state


def _propagator(h: Union[TermSum, ExactPropagator]) -> ExactPropagator:
    if isinstance(h, ExactPropagator):
        return h
    return build_exact_propagator(h)


def ground_state(h: Union[TermSum, ExactPropagator]
                 ) -> Tuple[float, StateVector]:
    """
    :returns: (energy, state) for the lowest eigenvector of h.
    """
    prop = _propagator(h)
    if prop.is_identity:
        raise ValidationError('An empty Hamiltonian has no ground state')
    vec = prop.eigenvectors[:, 0]
    return float(prop.eigenvalues[0]), StateVector.normalized(
        prop.n_qubits, vec)


def eigenmode_superposition(h: Union[TermSum, ExactPropagator],
                            seed: int,
                            n_modes: Optional[int] = DEFAULT_MODES
                            ) -> StateVector:
    """
    A random combination of the lowest eigenmodes of h.

    :param seed: Seed for the complex Gaussian mode coefficients.
    :param n_modes: Number of modes; capped at 2^n. None takes every mode.
    """
    prop = _propagator(h)
    if prop.is_identity:
        raise ValidationError('An empty Hamiltonian has no eigenmodes')
    dim = 1 << prop.n_qubits
    count = dim if n_modes is None else min(n_modes, dim)
    if count < 1:
        raise ValidationError(f'n_modes must be positive (got {n_modes})')
    if n_modes is not None and n_modes > dim:
        logger.info('only %d eigenmodes available, using all of them', dim)

    rng = np.random.Generator(np.random.Philox(seed))
    coeffs = rng.standard_normal(count) + 1j * rng.standard_normal(count)
    vec = prop.eigenvectors[:, :count] @ coeffs
    return StateVector.normalized(prop.n_qubits, vec)
