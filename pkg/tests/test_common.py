#!/usr/bin/env python
# test_common.py - Common functionality unit tests
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

from parameterized import parameterized
import unittest

from hybtrot.common import (
    HamiltonianParseError, NumericalError, SamplerMode, Scheme, U0Mode,
    ValidationError, check_positive, check_qubits, check_unit_interval,
    format_real)


class CommonTest(unittest.TestCase):

    @parameterized.expand([
        ('det1', Scheme.DETERMINISTIC_FIRST, False, False),
        ('det2', Scheme.DETERMINISTIC_SYMMETRIC, False, True),
        ('hyb1', Scheme.HYBRID_FIRST, True, False),
        ('hyb2', Scheme.HYBRID_SYMMETRIC, True, True),
    ])
    def test_scheme_flags(self, flag, scheme, hybrid, symmetric):
        self.assertEqual(scheme, Scheme.from_flag(flag))
        self.assertEqual(flag, scheme.flag)
        self.assertEqual(hybrid, scheme.is_hybrid)
        self.assertEqual(symmetric, scheme.is_symmetric)

    def test_sampler_and_u0_flags(self):
        for mode in SamplerMode:
            self.assertEqual(mode, SamplerMode.from_flag(mode.flag))
        for mode in U0Mode:
            self.assertEqual(mode, U0Mode.from_flag(mode.flag))

    def test_unknown_flag(self):
        with self.assertRaises(ValidationError):
            Scheme.from_flag('hyb3')
        with self.assertRaises(ValueError):
            SamplerMode.from_flag('')

    @parameterized.expand([
        (U0Mode.EXACT, 10, 10),
        (U0Mode.SPLIT_FIRST, 10, 10),
        (U0Mode.SPLIT_SYMMETRIC, 10, 19),
        (U0Mode.SPLIT_SYMMETRIC, 1, 1),
        (U0Mode.SPLIT_SYMMETRIC, 0, 0),
        (U0Mode.EXACT, 0, 0),
    ])
    def test_u0_gate_cost(self, mode, n_d, expected):
        self.assertEqual(expected, mode.gate_cost(n_d))

    def test_check_qubits(self):
        check_qubits(1)
        check_qubits(12)
        for n in (0, 13):
            with self.assertRaises(ValidationError):
                check_qubits(n)
        check_qubits(13, cap=13)

    def test_check_unit_interval(self):
        check_unit_interval('eps', 0.5)
        with self.assertRaises(ValidationError):
            check_unit_interval('eps', 1.)
        check_unit_interval('delta', 1., closed_above=True)
        with self.assertRaises(ValidationError):
            check_unit_interval('delta', 0., closed_above=True)

    def test_check_positive(self):
        check_positive('dt', 1e-9)
        for bad in (0., -1., float('inf'), float('nan')):
            with self.assertRaises(ValidationError):
                check_positive('dt', bad)

    def test_exception_hierarchy(self):
        self.assertTrue(issubclass(ValidationError, ValueError))
        self.assertTrue(issubclass(NumericalError, ArithmeticError))
        e = HamiltonianParseError('bad coefficient', 7)
        self.assertEqual(7, e.line_number)
        self.assertEqual('line 7: bad coefficient', str(e))
        self.assertIsInstance(e, ValidationError)

    def test_format_real(self):
        self.assertEqual('0.10000000000000001', format_real(0.1))
        self.assertEqual('0.4296875', format_real(0.4296875))
        self.assertEqual(0.1, float(format_real(0.1)))


if __name__ == '__main__':
    unittest.main()
