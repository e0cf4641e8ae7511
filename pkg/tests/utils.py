#!/usr/bin/env python
# utils.py - Helpers for unit tests
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


from __future__ import absolute_import

from functools import reduce
from typing import Optional, Text, Union
import unittest

import numpy as np

from hybtrot.evolve import StateVector
from hybtrot.hamiltonian import PartitionedHamiltonian
from hybtrot.pauli import HamiltonianTerm, PauliString

_SINGLE = {
    'I': np.eye(2, dtype=np.complex128),
    'X': np.array([[0, 1], [1, 0]], dtype=np.complex128),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    'Z': np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def kron_dense(label: Text) -> np.ndarray:
    """
    Dense matrix of a Pauli label built from Kronecker products. Qubit 0 is
    the least significant bit, so it is the rightmost factor.
    """
    return reduce(np.kron, [_SINGLE[c] for c in reversed(label)])


def random_state(n_qubits: int, seed: int) -> StateVector:
    rng = np.random.default_rng(seed)
    dim = 1 << n_qubits
    return StateVector.normalized(
        n_qubits, rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def random_pauli(n_qubits: int, rng: np.random.Generator) -> PauliString:
    """A uniformly random non-identity Pauli string."""
    while True:
        p = PauliString(n_qubits, int(rng.integers(1 << n_qubits)),
                        int(rng.integers(1 << n_qubits)))
        if not p.is_identity:
            return p


def random_hamiltonian(n_qubits: int, n_terms: int,
                       seed: int) -> PartitionedHamiltonian:
    """
    A Hamiltonian with ``n_terms`` distinct random strings and coefficients
    in [0.1, 1) with random signs.
    """
    rng = np.random.default_rng(seed)
    strings = {}
    while len(strings) < n_terms:
        p = random_pauli(n_qubits, rng)
        strings[p] = float(rng.uniform(0.1, 1.) * rng.choice([-1., 1.]))
    return PartitionedHamiltonian.from_terms(
        n_qubits, [HamiltonianTerm(c, p) for p, c in strings.items()])


def toy_hamiltonian() -> PartitionedHamiltonian:
    """0.5 X + 0.3 Z on one qubit."""
    return PartitionedHamiltonian.from_terms(1, [
        HamiltonianTerm(0.5, PauliString.from_label('X')),
        HamiltonianTerm(0.3, PauliString.from_label('Z')),
    ])


class HybtrotTestCase(unittest.TestCase):

    def assertAllClose(
            self, expected: np.ndarray, actual: np.ndarray,
            atol: float = 1e-12, msg: Optional[Text] = None) -> None:
        """
        Asserts two arrays have the same shape and agree elementwise.

        :param atol: Largest allowed absolute deviation.
        """
        expected = np.asarray(expected)
        actual = np.asarray(actual)
        self.assertEqual(expected.shape, actual.shape, msg)
        deviation = float(np.max(np.abs(expected - actual), initial=0.))
        self.assertLessEqual(
            deviation, atol,
            msg or f'max deviation {deviation:.3e} exceeds {atol:.1e}')

    def assertStateClose(
            self, expected: Union[StateVector, np.ndarray],
            actual: Union[StateVector, np.ndarray],
            atol: float = 1e-12) -> None:
        """Compares amplitudes of two states (or raw vectors)."""
        if isinstance(expected, StateVector):
            expected = expected.amplitudes
        if isinstance(actual, StateVector):
            actual = actual.amplitudes
        self.assertAllClose(expected, actual, atol)

    def assertNormalized(self, state: StateVector,
                         tol: float = 1e-9) -> None:
        self.assertAlmostEqual(1., state.norm(), delta=tol)
