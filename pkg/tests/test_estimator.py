#!/usr/bin/env python
# test_estimator.py - Tests for the fixed-budget error estimator
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
import math
import unittest

from hybtrot.analysis.estimator import (
    EstimatorPoint, argmin_nd, error_estimator, estimator_curve,
    estimator_point, nd_grid, optimal_partition, partition_constants)
from hybtrot.common import SamplerMode, Scheme, U0Mode, ValidationError
from hybtrot.hamiltonian import PartitionedHamiltonian, heisenberg_chain
from hybtrot.pauli import HamiltonianTerm, PauliString

from .utils import toy_hamiltonian


def _point(n_d, total):
    return EstimatorPoint(n_d, 1, 0., 0., 0., 0., total, 0.)


class ErrorEstimatorTest(unittest.TestCase):

    def test_budget_scaling(self):
        a = error_estimator(0.34, 0.2, 5, 1, 2., 100)
        b = error_estimator(0.34, 0.2, 5, 1, 2., 200)
        self.assertAlmostEqual(2., a.variance / b.variance, 12)
        self.assertAlmostEqual(8., a.bias / b.bias, 12)

    def test_value(self):
        est = error_estimator(0.5, 0.1, 3, 1, 2., 40)
        self.assertAlmostEqual(0.5 * 4 * 4 / 40, est.variance, 15)
        self.assertAlmostEqual(0.1 * 64 * 16 / 40 ** 3, est.bias, 15)
        self.assertAlmostEqual(est.variance + est.bias, est.total, 15)

    def test_step_cost_override(self):
        est = error_estimator(1., 0., 3, 1, 1., 10, step_cost=7)
        self.assertAlmostEqual(0.7, est.variance, 15)

    def test_endpoints(self):
        self.assertEqual(0., error_estimator(0.3, 0., 0, 1, 1., 10).bias)
        self.assertEqual(0., error_estimator(0., 0.2, 5, 0, 1., 10).variance)

    def test_rejects(self):
        with self.assertRaises(ValidationError):
            error_estimator(0.3, 0., 0, 1, 1., 0)
        with self.assertRaises(ValidationError):
            error_estimator(0.3, 0., 0, 1, 0., 10)


class GridTest(unittest.TestCase):

    @parameterized.expand([
        (10, 4, [0, 4, 8, 10]),
        (8, 4, [0, 4, 8]),
        (3, 1, [0, 1, 2, 3]),
        (3, 10, [0, 3]),
    ])
    def test_nd_grid(self, n_terms, stride, expected):
        self.assertEqual(expected, nd_grid(n_terms, stride))

    def test_rejects_stride(self):
        with self.assertRaises(ValidationError):
            nd_grid(5, 0)

    def test_argmin_ties(self):
        curve = [_point(0, 2.), _point(1, 1.), _point(2, 1.), _point(3, 3.)]
        self.assertEqual(1, argmin_nd(curve))


class PartitionConstantsTest(unittest.TestCase):

    def test_toy_uniform(self):
        c = partition_constants(toy_hamiltonian(), 0,
                                SamplerMode.UNIFORM_BATCH, 1)
        self.assertEqual((0, 1), (c.n_d, c.k))
        self.assertAlmostEqual(0.34, c.Lambda, 12)
        self.assertAlmostEqual(1., c.Gamma, 12)
        self.assertFalse(c.gamma_is_bound)
        self.assertEqual(0., c.comm_norm)
        self.assertEqual(0., c.C)

    def test_toy_importance(self):
        c = partition_constants(toy_hamiltonian(), 0, SamplerMode.IMPORTANCE,
                                1)
        self.assertAlmostEqual(0.64 - 0.34, c.Lambda, 12)
        self.assertAlmostEqual(0.8 + math.sqrt(0.34), c.Gamma, 12)
        self.assertTrue(c.gamma_is_bound)

    def test_single_h1_term(self):
        c = partition_constants(toy_hamiltonian(), 1, SamplerMode.IMPORTANCE,
                                1)
        self.assertEqual(0., c.Lambda)
        self.assertAlmostEqual(0.3, c.comm_norm, 12)

    def test_clamps_batch(self):
        c = partition_constants(toy_hamiltonian(), 0,
                                SamplerMode.UNIFORM_BATCH, 5)
        self.assertEqual(2, c.k)
        self.assertEqual(0., c.Lambda)
        self.assertEqual(0., c.Gamma)

    def test_endpoints(self):
        h = heisenberg_chain(3, field_seed=4)
        random = partition_constants(h, 0, SamplerMode.IMPORTANCE, 1)
        self.assertEqual(0., random.C)
        self.assertEqual(0., random.comm_norm)
        self.assertGreater(random.Lambda, 0.)
        fixed = partition_constants(h, h.n_terms, SamplerMode.IMPORTANCE, 1)
        self.assertEqual((0, 0., 0.), (fixed.k, fixed.Lambda, fixed.Gamma))
        self.assertGreater(fixed.C, 0.)
        self.assertEqual(0., partition_constants(
            h, h.n_terms, SamplerMode.IMPORTANCE, 1,
            include_h0_splitting=False).C)

    def test_point_matches_estimator(self):
        h = heisenberg_chain(3, field_seed=4)
        p = estimator_point(h, 4, SamplerMode.IMPORTANCE, 1, 2., 500)
        c = partition_constants(h, 4, SamplerMode.IMPORTANCE, 1)
        est = error_estimator(c.Lambda, c.C, 4, 1, 2., 500)
        self.assertEqual((est.variance, est.bias), (p.variance, p.bias))
        self.assertEqual(c.Gamma, p.Gamma)

    @parameterized.expand([
        ('split2', Scheme.HYBRID_FIRST, U0Mode.SPLIT_SYMMETRIC, 4, 8),
        ('symmetric exact', Scheme.HYBRID_SYMMETRIC, U0Mode.EXACT, 4, 6),
        ('symmetric split2', Scheme.HYBRID_SYMMETRIC,
         U0Mode.SPLIT_SYMMETRIC, 4, 9),
        ('split2 without H0', Scheme.HYBRID_FIRST, U0Mode.SPLIT_SYMMETRIC,
         0, 1),
    ])
    def test_point_charges_configured_step(self, name, scheme, u0, n_d,
                                           cost):
        h = heisenberg_chain(3, field_seed=4)
        c = partition_constants(h, n_d, SamplerMode.IMPORTANCE, 1)
        p = estimator_point(h, n_d, SamplerMode.IMPORTANCE, 1, 2., 500,
                            scheme=scheme, u0_mode=u0)
        est = error_estimator(c.Lambda, c.C, n_d, 1, 2., 500, step_cost=cost)
        self.assertEqual((est.variance, est.bias), (p.variance, p.bias), name)

    def test_split2_raises_estimate(self):
        h = heisenberg_chain(3, field_seed=4)
        exact = estimator_point(h, 4, SamplerMode.IMPORTANCE, 1, 2., 500)
        split = estimator_point(h, 4, SamplerMode.IMPORTANCE, 1, 2., 500,
                                u0_mode=U0Mode.SPLIT_SYMMETRIC)
        self.assertAlmostEqual(8 / 5, split.variance / exact.variance, 12)
        self.assertAlmostEqual(8 ** 3 / 5 ** 3, split.bias / exact.bias, 9)


class OptimalPartitionTest(unittest.TestCase):

    def test_single_term_tie(self):
        h = PartitionedHamiltonian.from_terms(
            1, [HamiltonianTerm(0.5, PauliString.from_label('X'))])
        curve = estimator_curve(h, SamplerMode.UNIFORM_BATCH, 1, 1., 10)
        self.assertEqual([0., 0.], [p.total for p in curve])
        self.assertEqual(0, optimal_partition(h, SamplerMode.UNIFORM_BATCH,
                                              1, 1., 10))

    def test_all_commuting(self):
        h = PartitionedHamiltonian.from_terms(2, [
            HamiltonianTerm(1., PauliString.from_label('ZI')),
            HamiltonianTerm(0.5, PauliString.from_label('IZ')),
            HamiltonianTerm(0.25, PauliString.from_label('ZZ')),
        ])
        curve = estimator_curve(h, SamplerMode.UNIFORM_BATCH, 1, 1., 100)
        self.assertEqual([0.] * 4, [p.C for p in curve])
        totals = [p.total for p in curve]
        self.assertGreater(totals[0], totals[1])
        # a single random term has no variance, so n_d = L - 1 already
        # reaches the minimum
        self.assertEqual(0., totals[2])
        self.assertEqual(0., totals[3])
        self.assertEqual(2, optimal_partition(h, SamplerMode.UNIFORM_BATCH, 1,
                                              1., 100))

    def test_stride(self):
        h = heisenberg_chain(3, field_seed=4)
        curve = estimator_curve(h, SamplerMode.IMPORTANCE, 1, 1., 1000,
                                stride=5)
        self.assertEqual([0, 5, 10, 12], [p.n_d for p in curve])


if __name__ == '__main__':
    unittest.main()
