#!/usr/bin/env python
# hybtrot/common.py - Constants and common functions used across hybtrot.
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
hybtrot.common defines the constants, mode enumerations, exceptions and small
validation helpers shared by the simulator, the samplers and the command line
driver.

Most applications only need the enumerations (to build a
:class:`hybtrot.scheme.SchemeConfig`) and the exception types.
"""

from __future__ import absolute_import

from enum import IntEnum
import logging
import math
from typing import Text

# Largest register we are willing to build dense 2^n x 2^n matrices for.
# 12 qubits is a 4096 x 4096 complex matrix (256 MiB).
DENSE_QUBIT_CAP = 12

# Terms with |coeff| below this are dropped on ingestion.
DEFAULT_COEFF_FLOOR = 1e-4

DEFAULT_ENSEMBLES = 80

# |<psi|psi> - 1| allowed on construction of a state vector.
NORM_TOLERANCE = 1e-9

POWER_ITERATION_TOLERANCE = 1e-8
POWER_ITERATION_MAX_STEPS = 10000

# Expectations over sampler outcomes are enumerated exactly up to this many
# atomic outcomes, otherwise estimated with MONTE_CARLO_DRAWS draws.
MAX_ENUMERATED_OUTCOMES = 10 ** 4
MONTE_CARLO_DRAWS = 10 ** 5

# Number of eigenmodes mixed into the default initial state.
DEFAULT_MODES = 100

# Significant digits written to result files.
CSV_DIGITS = 17

# Relative tolerance when checking that dt divides the horizon.
HORIZON_TOLERANCE = 1e-9

# Allowed gap between ||psi - phi||^2 and 2 (1 - Re <psi|phi>).
FIDELITY_IDENTITY_TOLERANCE = 1e-12

logger = logging.getLogger(__name__)


class HybtrotError(Exception):
    """Base class for all errors raised by hybtrot."""


class ValidationError(HybtrotError, ValueError):
    """An input (argument, file or configuration) is not acceptable."""


class HamiltonianParseError(ValidationError):
    """A Hamiltonian file could not be parsed."""

    def __init__(self, message: Text, line_number: int = 0):
        if line_number:
            message = f'line {line_number}: {message}'
        super().__init__(message)
        self.line_number = line_number


class NumericalError(HybtrotError, ArithmeticError):
    """A numerical procedure failed (non-convergence, norm drift, ...)."""


class Scheme(IntEnum):
    """
    Evolution scheme.

    The deterministic schemes split every term of the Hamiltonian each step;
    the hybrid schemes split the n_d largest terms and sample the rest.
    """
    DETERMINISTIC_FIRST = 0x01
    DETERMINISTIC_SYMMETRIC = 0x02
    HYBRID_FIRST = 0x11
    HYBRID_SYMMETRIC = 0x12

    @property
    def is_hybrid(self) -> bool:
        return bool(self & 0x10)

    @property
    def is_symmetric(self) -> bool:
        return (self & 0x0f) == 0x02

    @classmethod
    def from_flag(cls, flag: Text) -> 'Scheme':
        return _from_flag(cls, _SCHEME_FLAGS, flag)

    @property
    def flag(self) -> Text:
        return _to_flag(_SCHEME_FLAGS, self)


class SamplerMode(IntEnum):
    UNIFORM_BATCH = 0x00
    IMPORTANCE = 0x01
    STATE_ADAPTIVE = 0x02

    @classmethod
    def from_flag(cls, flag: Text) -> 'SamplerMode':
        return _from_flag(cls, _SAMPLER_FLAGS, flag)

    @property
    def flag(self) -> Text:
        return _to_flag(_SAMPLER_FLAGS, self)


class U0Mode(IntEnum):
    """How exp(-i dt H0) is evaluated inside a hybrid step."""
    EXACT = 0x00
    SPLIT_FIRST = 0x01
    SPLIT_SYMMETRIC = 0x02

    @classmethod
    def from_flag(cls, flag: Text) -> 'U0Mode':
        return _from_flag(cls, _U0_FLAGS, flag)

    @property
    def flag(self) -> Text:
        return _to_flag(_U0_FLAGS, self)

    def gate_cost(self, n_d: int) -> int:
        """
        Gate units charged for one application of U0 over n_d terms.

        An exact U0 is charged as if it were split to first order, so that
        budgets stay comparable between modes.
        """
        if n_d <= 0:
            return 0
        if self == U0Mode.SPLIT_SYMMETRIC:
            return 2 * n_d - 1
        return n_d


_SCHEME_FLAGS = {
    'det1': Scheme.DETERMINISTIC_FIRST,
    'det2': Scheme.DETERMINISTIC_SYMMETRIC,
    'hyb1': Scheme.HYBRID_FIRST,
    'hyb2': Scheme.HYBRID_SYMMETRIC,
}

_SAMPLER_FLAGS = {
    'uniform': SamplerMode.UNIFORM_BATCH,
    'importance': SamplerMode.IMPORTANCE,
    'adaptive': SamplerMode.STATE_ADAPTIVE,
}

_U0_FLAGS = {
    'exact': U0Mode.EXACT,
    'split1': U0Mode.SPLIT_FIRST,
    'split2': U0Mode.SPLIT_SYMMETRIC,
}

SCHEME_FLAGS = tuple(_SCHEME_FLAGS)
SAMPLER_FLAGS = tuple(_SAMPLER_FLAGS)
U0_FLAGS = tuple(_U0_FLAGS)


def _from_flag(cls, table, flag: Text):
    try:
        return table[flag]
    except KeyError:
        raise ValidationError(
            f'Unknown {cls.__name__} {flag!r}, expected one of '
            f'{", ".join(table)}') from None


def _to_flag(table, value) -> Text:
    for k, v in table.items():
        if v == value:
            return k
    raise KeyError(value)


def validate_qubits(n_qubits: int, cap: int = DENSE_QUBIT_CAP) -> bool:
    """
    Validates a register size against a dense-matrix cap.

    :returns: True if 1 <= n_qubits <= cap.
    """
    return 1 <= n_qubits <= cap


def check_qubits(n_qubits: int, cap: int = DENSE_QUBIT_CAP) -> None:
    """
    Checks that a register is small enough to be handled with dense matrices.

    :raises ValidationError: If the register is empty or above the cap.
    """
    if not validate_qubits(n_qubits, cap):
        raise ValidationError(
            f'{n_qubits} qubits is outside the dense range 1..{cap}')


def check_same_qubits(a: int, b: int) -> None:
    """
    :raises ValidationError: If the two qubit counts differ.
    """
    if a != b:
        raise ValidationError(f'Mismatched qubit counts: {a} != {b}')


def check_positive(name: Text, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise ValidationError(f'{name} must be positive (got {value})')


def check_nonnegative(name: Text, value: float) -> None:
    if not (value >= 0 and math.isfinite(value)):
        raise ValidationError(f'{name} must not be negative (got {value})')


def check_unit_interval(name: Text, value: float,
                        closed_above: bool = False) -> None:
    """
    Checks that 0 < value < 1 (or 0 < value <= 1 if closed_above).
    """
    ok = 0 < value <= 1 if closed_above else 0 < value < 1
    if not ok:
        bracket = ']' if closed_above else ')'
        raise ValidationError(
            f'{name} must be in (0, 1{bracket} (got {value})')


def format_real(value: float) -> Text:
    """Formats a float with CSV_DIGITS significant digits."""
    return f'{value:.{CSV_DIGITS}g}'
