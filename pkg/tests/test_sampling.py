#!/usr/bin/env python
# test_sampling.py - Tests for H1 samplers and the statistics of dH
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

import math
from parameterized import parameterized
import unittest

import numpy as np

from hybtrot.common import SamplerMode, ValidationError
from hybtrot.evolve import StateVector
from hybtrot.pauli import (
    HamiltonianTerm, PauliString, TermSum, pauli_sum_from_dict, spectral_norm,
    to_dense)
from hybtrot.sampling import (
    SamplerSpec, delta_h_constants, delta_h_operator, enumerate_outcomes,
    importance_lambda, importance_probs, outcome_count, sample_batch,
    state_adaptive_probs, trajectory_rng)

from .utils import HybtrotTestCase, random_hamiltonian, random_state


def _h1(seed, n_qubits=3, n_terms=6):
    return list(random_hamiltonian(n_qubits, n_terms, seed).terms)


def _enumerated_second_moment(h1, spec):
    n_r = len(h1)
    dim = 1 << h1[0].n_qubits
    out = np.zeros((dim, dim), dtype=np.complex128)
    for p, draw in enumerate_outcomes(spec, n_r):
        d = to_dense(delta_h_operator(h1, draw))
        out += p * d @ d
    return out


class TrajectoryRngTest(unittest.TestCase):

    def test_reproducible(self):
        a = trajectory_rng(42, 3).random(5)
        b = trajectory_rng(42, 3).random(5)
        self.assertEqual(a.tolist(), b.tolist())

    def test_streams_differ(self):
        a = trajectory_rng(42, 3).random(5)
        self.assertNotEqual(a.tolist(), trajectory_rng(42, 4).random(5)
                            .tolist())
        self.assertNotEqual(a.tolist(), trajectory_rng(43, 3).random(5)
                            .tolist())


class SamplerSpecTest(HybtrotTestCase):

    def test_importance_probs(self):
        h1 = [HamiltonianTerm(c, PauliString.from_label(l))
              for c, l in ((0.5, 'X'), (-0.3, 'Z'), (0.2, 'Y'))]
        self.assertAllClose([0.5, 0.3, 0.2], importance_probs(h1), 1e-15)
        lam, lam2 = importance_lambda(h1)
        self.assertAlmostEqual(1., lam, 15)
        self.assertAlmostEqual(1., lam2, 15)

    def test_state_adaptive_probs(self):
        h1 = _h1(1)
        state = random_state(3, 0)
        self.assertAllClose(importance_probs(h1),
                            state_adaptive_probs(h1, state), 1e-15)
        grouped = [pauli_sum_from_dict(1, {'X0': 1.}),
                   pauli_sum_from_dict(1, {'Z0': 1., 'X0': 1.})]
        probs = state_adaptive_probs(grouped, StateVector.basis(1, 0))
        # ||X|0>|| = 1, ||(Z + X)|0>|| = sqrt(2)
        s = 1 + math.sqrt(2)
        self.assertAllClose([1 / s, math.sqrt(2) / s], probs, 1e-15)

    @parameterized.expand([
        ('importance K>1', dict(mode=SamplerMode.IMPORTANCE, batch_size=2,
                                probs=(0.5, 0.5))),
        ('missing probs', dict(mode=SamplerMode.IMPORTANCE)),
        ('uniform with probs', dict(mode=SamplerMode.UNIFORM_BATCH,
                                    probs=(1.,))),
        ('zero batch', dict(mode=SamplerMode.UNIFORM_BATCH, batch_size=0)),
        ('bad sum', dict(mode=SamplerMode.IMPORTANCE, probs=(0.5, 0.4))),
        ('negative', dict(mode=SamplerMode.IMPORTANCE, probs=(1.5, -0.5))),
    ])
    def test_invalid_specs(self, name, kwargs):
        with self.assertRaises(ValidationError, msg=name):
            SamplerSpec(**kwargs)

    def test_validate(self):
        with self.assertRaises(ValidationError):
            SamplerSpec.uniform(4).validate(3)
        with self.assertRaises(ValidationError):
            SamplerSpec.uniform(1).validate(0)
        with self.assertRaises(ValidationError):
            SamplerSpec.importance(_h1(2)).validate(5)
        self.assertEqual(0, SamplerSpec.uniform(3).effective_batch(0))
        self.assertEqual(3, SamplerSpec.uniform(3).effective_batch(7))

    def test_for_terms(self):
        h1 = _h1(3)
        self.assertEqual(SamplerSpec.uniform(2),
                         SamplerSpec.for_terms(SamplerMode.UNIFORM_BATCH, h1,
                                               2))
        with self.assertRaises(ValidationError):
            SamplerSpec.for_terms(SamplerMode.IMPORTANCE, h1, 2)
        with self.assertRaises(ValidationError):
            SamplerSpec.for_terms(SamplerMode.STATE_ADAPTIVE, h1)


class SampleBatchTest(HybtrotTestCase):

    def test_uniform_batch(self):
        rng = np.random.default_rng(0)
        spec = SamplerSpec.uniform(3)
        counts = np.zeros(7)
        draws = 7000
        for _ in range(draws):
            draw = sample_batch(spec, 7, rng)
            self.assertEqual(3, len(set(draw.indices)))
            self.assertEqual(sorted(draw.indices), list(draw.indices))
            self.assertEqual((7 / 3,) * 3, draw.weights)
            counts[list(draw.indices)] += 1
        # each index is picked with probability 3/7
        self.assertAllClose(np.full(7, 3 / 7), counts / draws, 0.03)

    def test_full_batch(self):
        draw = sample_batch(SamplerSpec.uniform(4), 4,
                            np.random.default_rng(1))
        self.assertEqual((0, 1, 2, 3), draw.indices)
        self.assertEqual((1.,) * 4, draw.weights)

    def test_importance(self):
        spec = SamplerSpec(SamplerMode.IMPORTANCE, 1, (0.7, 0., 0.3))
        rng = np.random.default_rng(2)
        counts = np.zeros(3)
        for _ in range(10000):
            draw = sample_batch(spec, 3, rng)
            (j, w), = list(draw)
            self.assertAlmostEqual(1. / spec.probs[j], w)
            counts[j] += 1
        self.assertEqual(0, counts[1])
        self.assertAllClose([0.7, 0., 0.3], counts / 10000, 0.02)

    def test_reproducible(self):
        spec = SamplerSpec.uniform(2)
        rng_a, rng_b = trajectory_rng(5, 0), trajectory_rng(5, 0)
        a = [sample_batch(spec, 9, rng_a).indices for _ in range(20)]
        b = [sample_batch(spec, 9, rng_b).indices for _ in range(20)]
        self.assertEqual(a, b)


class OutcomeTest(HybtrotTestCase):

    @parameterized.expand([(1,), (2,), (5,), (6,)])
    def test_uniform_outcomes_unbiased(self, k):
        h1 = _h1(4)
        spec = SamplerSpec.uniform(k)
        outcomes = list(enumerate_outcomes(spec, 6))
        self.assertEqual(outcome_count(spec, 6), len(outcomes))
        self.assertAlmostEqual(1., math.fsum(p for p, _ in outcomes), 12)
        mean = sum(p * to_dense(delta_h_operator(h1, d))
                   for p, d in outcomes)
        self.assertAllClose(np.zeros((8, 8)), mean, 1e-12)

    def test_importance_outcomes_unbiased(self):
        h1 = _h1(5)
        spec = SamplerSpec.importance(h1)
        outcomes = list(enumerate_outcomes(spec, len(h1)))
        self.assertEqual(len(h1), outcome_count(spec, len(h1)))
        mean = sum(p * to_dense(delta_h_operator(h1, d))
                   for p, d in outcomes)
        self.assertAllClose(np.zeros((8, 8)), mean, 1e-12)


class DeltaHConstantsTest(HybtrotTestCase):

    @parameterized.expand([
        (seed, k) for seed in range(4) for k in (1, 2, 5, 6)
    ])
    def test_uniform_sigma_matches_enumeration(self, seed, k):
        h1 = _h1(10 + seed)
        spec = SamplerSpec.uniform(k)
        consts = delta_h_constants(h1, spec)
        expected = _enumerated_second_moment(h1, spec)
        self.assertAllClose(expected, to_dense(consts.sigma, 3), 1e-12)
        self.assertAlmostEqual(np.linalg.norm(expected, 2), consts.lambda_,
                               10)

    @parameterized.expand([(seed,) for seed in range(4)])
    def test_importance_sigma_matches_enumeration(self, seed):
        h1 = _h1(20 + seed)
        spec = SamplerSpec.importance(h1)
        consts = delta_h_constants(h1, spec)
        expected = _enumerated_second_moment(h1, spec)
        self.assertAllClose(expected, to_dense(consts.sigma, 3), 1e-11)
        lam, lam2 = importance_lambda(h1)
        self.assertLessEqual(consts.lambda_, lam2 + 1e-12)

    def test_full_batch_is_exact(self):
        h1 = _h1(30)
        consts = delta_h_constants(h1, SamplerSpec.uniform(len(h1)))
        self.assertFalse(consts.sigma)
        self.assertEqual(0., consts.lambda_)
        self.assertEqual(0., consts.gamma)

    def test_single_term(self):
        h1 = _h1(31, n_terms=1)
        consts = delta_h_constants(h1, SamplerSpec.uniform(1))
        self.assertEqual(0., consts.lambda_)

    def test_sigma_monte_carlo(self):
        h1 = _h1(40, n_qubits=2, n_terms=5)
        spec = SamplerSpec.uniform(2)
        consts = delta_h_constants(h1, spec)
        rng = trajectory_rng(0, 0)
        draws = 20000
        samples = []
        for _ in range(draws):
            d = to_dense(delta_h_operator(h1, sample_batch(spec, 5, rng)))
            samples.append(d @ d)
        samples = np.array(samples)
        mean = samples.mean(axis=0)
        stderr = samples.std(axis=0, ddof=1) / math.sqrt(draws)
        deviation = np.abs(mean - to_dense(consts.sigma))
        self.assertTrue(np.all(deviation <= 4 * stderr + 1e-12))

    def test_gamma_uniform_single(self):
        h1 = _h1(41)
        consts = delta_h_constants(h1, SamplerSpec.uniform(1))
        self.assertAlmostEqual(6 * max(abs(t.coeff) for t in h1),
                               consts.gamma, 12)
        self.assertFalse(consts.gamma_is_bound)

    @parameterized.expand([('uniform K=2', 2), ('uniform K=4', 4),
                           ('importance', None)])
    def test_gamma_bounds_every_outcome(self, name, k):
        h1 = _h1(42)
        if k is None:
            spec = SamplerSpec.importance(h1)
        else:
            spec = SamplerSpec.uniform(k)
        consts = delta_h_constants(h1, spec)
        self.assertTrue(consts.gamma_is_bound)
        worst = max(spectral_norm(delta_h_operator(h1, d))
                    for _, d in enumerate_outcomes(spec, len(h1)))
        self.assertLessEqual(worst, consts.gamma + 1e-12, name)

    def test_zero_probability_rejected(self):
        h1 = _h1(43, n_terms=2)
        spec = SamplerSpec(SamplerMode.IMPORTANCE, 1, (1., 0.))
        with self.assertRaises(ValidationError):
            delta_h_constants(h1, spec)

    def test_empty(self):
        with self.assertRaises(ValidationError):
            delta_h_constants([], SamplerSpec.uniform())

    def test_delta_h_operator_grouped(self):
        grouped = [pauli_sum_from_dict(1, {'X0': 1.}),
                   pauli_sum_from_dict(1, {'Z0': 0.5})]
        spec = SamplerSpec.uniform(1)
        draw = next(d for _, d in enumerate_outcomes(spec, 2))
        dh = delta_h_operator(grouped, draw)
        self.assertEqual(pauli_sum_from_dict(1, {'X0': 1., 'Z0': -0.5}), dh)
        self.assertIsInstance(dh, TermSum)


if __name__ == '__main__':
    unittest.main()
