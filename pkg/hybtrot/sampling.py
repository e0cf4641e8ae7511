#!/usr/bin/env python
# hybtrot/sampling.py - Random selection of H1 terms and their statistics
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
Samplers for the random part (H1) of a hybrid step.

Each step draws a :class:`BatchDraw`: a set of H1 indices and a weight for
each, chosen so that sum(w_l h_l) over the draw is an unbiased estimate of
H1. The deviation from H1 is the random operator dH, whose second moment
(Sigma), its norm (Lambda) and an almost-sure bound on its norm (Gamma) drive
every error bound in :mod:`hybtrot.analysis.bounds`.

Random numbers come from a Philox counter-based generator. Trajectory ``i`` of
an ensemble seeded with ``base_seed`` uses the stream
``SeedSequence(entropy=base_seed, spawn_key=(i,))``, so a trajectory does not
depend on which worker runs it or in which order.
"""

from __future__ import absolute_import
from __future__ import annotations

from dataclasses import dataclass
import itertools
import logging
import math
from typing import (
    Iterator, NamedTuple, Optional, Sequence, Text, Tuple, Union)

import numpy as np

from hybtrot.common import SamplerMode, ValidationError
from hybtrot.evolve import StateVector
from hybtrot.pauli import (
    HamiltonianTerm, TermSum, apply_term_sum, spectral_norm)

__all__ = [
    'SamplerSpec',
    'BatchDraw',
    'DeltaHConstants',
    'importance_probs',
    'importance_lambda',
    'state_adaptive_probs',
    'sample_batch',
    'delta_h_constants',
    'delta_h_operator',
    'enumerate_outcomes',
    'outcome_count',
    'trajectory_rng',
]

logger = logging.getLogger(__name__)

# A term of H1 is either a single Pauli term or a group of strings.
H1Term = Union[HamiltonianTerm, TermSum]


def trajectory_rng(base_seed: int, index: int) -> np.random.Generator:
    """The private random stream of trajectory ``index``."""
    seq = np.random.SeedSequence(entropy=base_seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(seq))


def _term_sum(term: H1Term, n_qubits: int) -> TermSum:
    if isinstance(term, TermSum):
        return term
    return TermSum.from_terms(n_qubits, [term])


def _n_qubits(terms: Sequence[H1Term]) -> int:
    return terms[0].n_qubits


def _check_probs(probs: np.ndarray) -> None:
    if probs.ndim != 1 or not len(probs):
        raise ValidationError('A probability vector needs at least one entry')
    if np.any(probs < 0) or not np.all(np.isfinite(probs)):
        raise ValidationError('Probabilities must be finite and non-negative')
    total = math.fsum(probs)
    if abs(total - 1.) > 1e-12:
        raise ValidationError(f'Probabilities sum to {total!r}, not 1')


def _normalize(weights: Sequence[float]) -> np.ndarray:
    total = math.fsum(weights)
    if not total > 0:
        raise ValidationError('Cannot build probabilities from zero weights')
    return np.array([w / total for w in weights], dtype=np.float64)


def importance_probs(h1: Sequence[HamiltonianTerm]) -> np.ndarray:
    """
    p_j = |c_j| / sum_k |c_k|, summed with compensation.

    :raises ValidationError: If h1 is empty or every coefficient is zero.
    """
    if not h1:
        raise ValidationError('importance_probs needs at least one term')
    return _normalize([abs(t.coeff) for t in h1])


def importance_lambda(h1: Sequence[HamiltonianTerm]) -> Tuple[float, float]:
    """
    :returns: (lambda, lambda^2) where lambda = sum ||h_j||. lambda^2 bounds
              Lambda for importance sampling.
    """
    lam = math.fsum(abs(t.coeff) for t in h1)
    return lam, lam * lam


def state_adaptive_probs(h1: Sequence[H1Term],
                         state: StateVector) -> np.ndarray:
    """
    p_j proportional to ||h_j |psi>||.

    For a single Pauli term the norm is |c_j| exactly, so on pure Pauli input
    this reproduces :func:`importance_probs`. Grouped terms are applied to the
    state.
    """
    if not h1:
        raise ValidationError('state_adaptive_probs needs at least one term')
    norms = []
    for term in h1:
        if isinstance(term, HamiltonianTerm):
            norms.append(abs(term.coeff))
        else:
            v = apply_term_sum(term, state.amplitudes)
            norms.append(float(np.linalg.norm(v)))
    return _normalize(norms)


@dataclass(frozen=True)
class SamplerSpec:
    """
    How H1 terms are picked each step.

    :param mode: Sampling mode.
    :param batch_size: K, the number of distinct terms picked per step.
                       Only uniform batches may use K > 1.
    :param probs: Selection probabilities (importance modes only).
    """
    mode: SamplerMode
    batch_size: int = 1
    probs: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValidationError(
                f'Batch size must be at least 1 (got {self.batch_size})')
        if self.mode == SamplerMode.UNIFORM_BATCH:
            if self.probs is not None:
                raise ValidationError(
                    'Uniform batches do not take probabilities')
        else:
            if self.batch_size != 1:
                raise ValidationError(
                    f'{self.mode.name} sampling is defined for K = 1 only '
                    f'(got K = {self.batch_size})')
            if self.probs is None:
                raise ValidationError(
                    f'{self.mode.name} sampling needs probabilities')
            _check_probs(np.asarray(self.probs))

    @classmethod
    def uniform(cls, batch_size: int = 1) -> SamplerSpec:
        return cls(SamplerMode.UNIFORM_BATCH, batch_size)

    @classmethod
    def importance(cls, h1: Sequence[HamiltonianTerm]) -> SamplerSpec:
        return cls(SamplerMode.IMPORTANCE, 1,
                   tuple(float(p) for p in importance_probs(h1)))

    @classmethod
    def state_adaptive(cls, h1: Sequence[H1Term],
                       state: StateVector) -> SamplerSpec:
        return cls(SamplerMode.STATE_ADAPTIVE, 1,
                   tuple(float(p) for p in state_adaptive_probs(h1, state)))

    @classmethod
    def for_terms(cls, mode: SamplerMode, h1: Sequence[H1Term],
                  batch_size: int = 1,
                  state: Optional[StateVector] = None) -> SamplerSpec:
        """Builds a spec of the given mode for a concrete H1."""
        if mode == SamplerMode.UNIFORM_BATCH:
            return cls.uniform(batch_size)
        if batch_size != 1:
            raise ValidationError(
                f'{mode.name} sampling is defined for K = 1 only '
                f'(got K = {batch_size})')
        if mode == SamplerMode.IMPORTANCE:
            return cls.importance(h1)
        if state is None:
            raise ValidationError('State-adaptive sampling needs a state')
        return cls.state_adaptive(h1, state)

    @property
    def probabilities(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=np.float64)

    def effective_batch(self, n_r: int) -> int:
        """Terms applied per step: K, or 0 when there is nothing to sample."""
        return self.batch_size if n_r > 0 else 0

    def validate(self, n_r: int) -> None:
        """
        :raises ValidationError: If this sampler cannot sample from n_r terms.
        """
        if n_r < 1:
            raise ValidationError('Nothing to sample: H1 is empty')
        if self.mode == SamplerMode.UNIFORM_BATCH:
            if self.batch_size > n_r:
                raise ValidationError(
                    f'Batch size K = {self.batch_size} exceeds n_r = {n_r}')
        elif len(self.probs) != n_r:
            raise ValidationError(
                f'{len(self.probs)} probabilities for {n_r} terms')


@dataclass(frozen=True)
class BatchDraw:
    """Selected H1 indices (ascending) and the weight of each."""
    indices: Tuple[int, ...]
    weights: Tuple[float, ...]

    def __iter__(self) -> Iterator[Tuple[int, float]]:
        return iter(zip(self.indices, self.weights))


def sample_batch(spec: SamplerSpec, n_r: int,
                 rng: np.random.Generator) -> BatchDraw:
    """
    Draws one batch.

    Uniform batches are a uniformly random K-subset from a partial
    Fisher-Yates shuffle, weighted n_r/K. Importance modes pick a single index
    by inverting the cumulative distribution, weighted 1/p.

    :raises ValidationError: If K > n_r or the probabilities do not match.
    """
    spec.validate(n_r)
    if spec.mode == SamplerMode.UNIFORM_BATCH:
        k = spec.batch_size
        pool = list(range(n_r))
        for i in range(k):
            j = i + int(rng.integers(n_r - i))
            pool[i], pool[j] = pool[j], pool[i]
        weight = n_r / k
        return BatchDraw(tuple(sorted(pool[:k])), (weight,) * k)

    probs = spec.probabilities
    cdf = np.cumsum(probs)
    j = int(np.searchsorted(cdf, rng.random() * cdf[-1], side='right'))
    j = min(j, n_r - 1)
    while probs[j] == 0:
        # Only reachable through rounding at the top of the cdf.
        j -= 1
    return BatchDraw((j,), (1. / probs[j],))


def outcome_count(spec: SamplerSpec, n_r: int) -> int:
    """Number of distinct draws the sampler can produce."""
    if spec.mode == SamplerMode.UNIFORM_BATCH:
        return math.comb(n_r, spec.batch_size)
    return n_r


def enumerate_outcomes(spec: SamplerSpec,
                       n_r: int) -> Iterator[Tuple[float, BatchDraw]]:
    """Yields (probability, draw) for every possible draw."""
    spec.validate(n_r)
    if spec.mode == SamplerMode.UNIFORM_BATCH:
        k = spec.batch_size
        p = 1. / math.comb(n_r, k)
        weights = (n_r / k,) * k
        for subset in itertools.combinations(range(n_r), k):
            yield p, BatchDraw(subset, weights)
        return
    for j, p in enumerate(spec.probabilities):
        if p > 0:
            yield float(p), BatchDraw((j,), (1. / p,))


def delta_h_operator(h1: Sequence[H1Term], draw: BatchDraw) -> TermSum:
    """dH = sum over the draw of w_l h_l, minus H1."""
    n = _n_qubits(h1)
    total = TermSum(n)
    for term in h1:
        total = total + _term_sum(term, n)
    picked = TermSum(n)
    for index, weight in draw:
        picked = picked + _term_sum(h1[index], n).scale(weight)
    return picked - total


class DeltaHConstants(NamedTuple):
    """
    Statistics of dH for a sampler.

    ``gamma_is_bound`` is set when Gamma is an upper bound rather than the
    attained supremum.
    """
    sigma: TermSum
    lambda_: float
    gamma: float
    gamma_is_bound: bool = False


def _square_sum(h1: Sequence[HamiltonianTerm], n: int) -> TermSum:
    h = TermSum.from_terms(n, h1)
    return h * h


def _top_k_sum(magnitudes: Sequence[float], k: int, largest: bool) -> float:
    ordered = sorted(magnitudes, reverse=largest)
    return math.fsum(ordered[:k])


def delta_h_constants(h1: Sequence[HamiltonianTerm],
                      spec: SamplerSpec) -> DeltaHConstants:
    """
    Computes (Sigma, Lambda, Gamma) for sampling ``h1`` with ``spec``.

    Sigma = E[dH^2] is assembled as a TermSum (h_l^2 = c_l^2 I):

    * uniform batches:
      Sigma = (1/K) ((n_r - K)/(n_r - 1)) n_r (sum h_l^2 - H1^2/n_r),
      and 0 for n_r = 1;
    * importance modes: Sigma = sum h_l^2 / p_l - H1^2.

    Gamma is n_r max|c| for uniform K = 1, 0 when K = n_r, and otherwise a
    triangle-inequality bound over the worst K-subset. For importance modes
    it is max |c_l|/p_l + ||H1||, also a bound.

    :raises ValidationError: If h1 is empty.
    """
    if not h1:
        raise ValidationError('delta_h_constants needs a non-empty H1')
    n_r = len(h1)
    n = _n_qubits(h1)
    spec.validate(n_r)
    mags = [abs(t.coeff) for t in h1]
    identity = TermSum.identity(n)
    squares = math.fsum(m * m for m in mags)

    if spec.mode == SamplerMode.UNIFORM_BATCH:
        k = spec.batch_size
        if n_r == 1 or k == n_r:
            sigma = TermSum(n)
        else:
            delta = identity.scale(squares) - _square_sum(h1, n).scale(
                1. / n_r)
            sigma = delta.scale((n_r - k) / (k * (n_r - 1)) * n_r)

        total = math.fsum(mags)
        if k == n_r:
            gamma, bound = 0., False
        elif k == 1:
            gamma, bound = n_r * max(mags), False
        else:
            ratio = n_r / k
            picked = _top_k_sum(mags, k, largest=ratio >= 2)
            gamma, bound = max(0., total + (ratio - 2) * picked), True
    else:
        probs = spec.probabilities
        for j, (m, p) in enumerate(zip(mags, probs)):
            if m > 0 and p <= 0:
                raise ValidationError(
                    f'Term {j} has a nonzero coefficient but probability 0')
        weighted = math.fsum(m * m / p for m, p in zip(mags, probs) if p > 0)
        sigma = identity.scale(weighted) - _square_sum(h1, n)
        h1_norm = spectral_norm(TermSum.from_terms(n, h1))
        gamma = max(m / p for m, p in zip(mags, probs) if p > 0) + h1_norm
        bound = True

    lam = spectral_norm(sigma) if sigma else 0.
    logger.debug('dH constants: Lambda=%r Gamma=%r (%s)', lam, gamma,
                 'bound' if bound else 'exact')
    return DeltaHConstants(sigma, lam, gamma, bound)
