#!/usr/bin/env python
# hybtrot/hamiltonian.py - Hamiltonian storage, file format and partitioning
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
Hamiltonians as magnitude-ordered lists of Pauli terms.

File format (UTF-8, line oriented)::

    # comment
    qubits 2
    0.5 Z1
    0.3 X0 X1
    -1.25

The first non-comment line declares the register size. Every other line is a
real coefficient followed by zero or more operators (a letter in XYZ followed
by a qubit index). A line with only a coefficient is a multiple of the
identity; it is kept as :attr:`PartitionedHamiltonian.identity_offset` and
does not take part in the evolution.
"""

from __future__ import absolute_import
from __future__ import annotations

from dataclasses import dataclass, field, replace
import io
import logging
import math
import os
from typing import Dict, Iterable, List, Optional, Text, TextIO, Tuple, Union

import numpy as np

from hybtrot.common import (
    DEFAULT_COEFF_FLOOR, HamiltonianParseError, ValidationError, format_real)
from hybtrot.pauli import (
    HamiltonianTerm, PauliString, TermSum, commutator, spectral_norm)

__all__ = [
    'PartitionedHamiltonian',
    'load_hamiltonian',
    'parse_hamiltonian',
    'write_hamiltonian',
    'heisenberg_chain',
    'partition',
    'commutator_norm',
    'bch_constant',
]

logger = logging.getLogger(__name__)


def _term_key(t: HamiltonianTerm) -> Tuple[float, Text]:
    # Ties in magnitude are broken by the dense label.
    return -abs(t.coeff), t.pauli.label


def sort_terms(
        terms: Iterable[HamiltonianTerm]) -> Tuple[HamiltonianTerm, ...]:
    return tuple(sorted(terms, key=_term_key))


@dataclass(frozen=True)
class PartitionedHamiltonian:
    """
    A Hamiltonian stored as terms sorted by magnitude (largest first).

    The first ``n_d`` terms form H0 (evolved deterministically) and the other
    ``n_r`` terms form H1 (sampled).
    """
    n_qubits: int
    terms: Tuple[HamiltonianTerm, ...]
    n_d: int = 0
    identity_offset: float = 0.
    source: Text = field(default='', compare=False)

    def __post_init__(self):
        if not self.terms:
            raise ValidationError('A Hamiltonian needs at least one term')
        for t in self.terms:
            if t.n_qubits != self.n_qubits:
                raise ValidationError(
                    f'Term {t} has {t.n_qubits} qubits, expected '
                    f'{self.n_qubits}')
            if t.pauli.is_identity:
                raise ValidationError(
                    'Identity terms belong in identity_offset')
        for a, b in zip(self.terms, self.terms[1:]):
            if _term_key(a) > _term_key(b):
                raise ValidationError('Terms are not sorted by magnitude')
        if not 0 <= self.n_d <= len(self.terms):
            raise ValidationError(
                f'n_d must be in [0, {len(self.terms)}] (got {self.n_d})')

    @classmethod
    def from_terms(cls, n_qubits: int, terms: Iterable[HamiltonianTerm],
                   n_d: int = 0, **kwargs) -> PartitionedHamiltonian:
        return cls(n_qubits, sort_terms(terms), n_d, **kwargs)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def n_r(self) -> int:
        return len(self.terms) - self.n_d

    @property
    def h0_terms(self) -> Tuple[HamiltonianTerm, ...]:
        return self.terms[:self.n_d]

    @property
    def h1_terms(self) -> Tuple[HamiltonianTerm, ...]:
        return self.terms[self.n_d:]

    @property
    def magnitudes(self) -> List[float]:
        return [abs(t.coeff) for t in self.terms]

    def with_n_d(self, n_d: int) -> PartitionedHamiltonian:
        return replace(self, n_d=n_d)

    def term_sum(self) -> TermSum:
        return TermSum.from_terms(self.n_qubits, self.terms)

    def __str__(self):
        return (f'<PartitionedHamiltonian n_qubits={self.n_qubits} '
                f'L={self.n_terms} n_d={self.n_d}>')


def parse_hamiltonian(lines: Iterable[Union[Text, bytes]],
                      coeff_floor: float = DEFAULT_COEFF_FLOOR,
                      source: Text = '') -> PartitionedHamiltonian:
    """
    Parses a Hamiltonian from lines of text. Byte lines are decoded as
    UTF-8.

    Duplicate strings are merged before the coefficient floor is applied.

    :raises HamiltonianParseError: With the line number of the bad line.
    """
    n_qubits = None  # type: Optional[int]
    merged = {}  # type: Dict[PauliString, float]
    offset = 0.
    identity_lines = 0

    for line_number, line in enumerate(lines, 1):
        if isinstance(line, bytes):
            try:
                line = line.decode('utf-8')
            except UnicodeDecodeError as e:
                raise HamiltonianParseError(
                    f'not valid UTF-8 ({e.reason} at byte {e.start})',
                    line_number) from None
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        fields = line.split()

        if n_qubits is None:
            if len(fields) != 2 or fields[0] != 'qubits':
                raise HamiltonianParseError(
                    f'expected "qubits N", got {line!r}', line_number)
            try:
                n_qubits = int(fields[1])
            except ValueError:
                raise HamiltonianParseError(
                    f'invalid qubit count {fields[1]!r}',
                    line_number) from None
            if n_qubits < 1:
                raise HamiltonianParseError(
                    f'qubit count must be positive (got {n_qubits})',
                    line_number)
            continue

        try:
            coeff = float(fields[0])
        except ValueError:
            raise HamiltonianParseError(
                f'invalid coefficient {fields[0]!r}', line_number) from None
        if not math.isfinite(coeff):
            raise HamiltonianParseError(
                f'coefficient must be finite (got {fields[0]})', line_number)

        try:
            pauli = PauliString.parse(n_qubits, ' '.join(fields[1:]))
        except ValidationError as e:
            raise HamiltonianParseError(str(e), line_number) from None

        if pauli.is_identity:
            identity_lines += 1
            offset += coeff
            continue

        if pauli in merged:
            logger.info('line %d: merging duplicate term %s', line_number,
                        pauli)
        merged[pauli] = merged.get(pauli, 0.) + coeff

    if n_qubits is None:
        raise HamiltonianParseError('missing "qubits N" header')

    if identity_lines:
        logger.info(
            '%d identity line(s) excluded from evolution, global phase '
            'offset %r', identity_lines, offset)

    kept = [HamiltonianTerm(c, p) for p, c in merged.items()
            if abs(c) >= coeff_floor and c != 0]
    dropped = len(merged) - len(kept)
    if dropped:
        logger.info('dropped %d term(s) below coefficient floor %g', dropped,
                    coeff_floor)
    if not kept:
        raise HamiltonianParseError(
            'Hamiltonian is empty after applying the coefficient floor')

    return PartitionedHamiltonian.from_terms(
        n_qubits, kept, identity_offset=offset, source=source)


def load_hamiltonian(path: Union[Text, os.PathLike],
                     coeff_floor: float = DEFAULT_COEFF_FLOOR
                     ) -> PartitionedHamiltonian:
    """
    Loads a Hamiltonian file.

    :param path: File to read.
    :param coeff_floor: Terms with a smaller magnitude (after merging
                        duplicates) are dropped.
    :returns: A PartitionedHamiltonian with n_d = 0.
    """
    with io.open(path, 'rb') as f:
        h = parse_hamiltonian(f, coeff_floor, source=os.fspath(path))
    logger.info('loaded %s: %d qubits, %d terms', path, h.n_qubits,
                h.n_terms)
    return h


def write_hamiltonian(h: PartitionedHamiltonian, f: TextIO) -> None:
    """Writes a Hamiltonian in the file format, one term per line."""
    f.write(f'qubits {h.n_qubits}\n')
    if h.identity_offset:
        f.write(f'{format_real(h.identity_offset)}\n')
    for t in h.terms:
        f.write(f'{format_real(t.coeff)} {t.pauli}\n')


def heisenberg_chain(n: int, field_seed: int) -> PartitionedHamiltonian:
    """
    Builds a Heisenberg chain with power-law couplings and a random field.

    Every pair i < j gets XX, YY and ZZ terms with coefficient 1/|j - i|^4,
    and every site gets a field term B_i Z_i with B_i uniform on [-1, 1]. The
    fields come from a Philox generator keyed on ``field_seed``, so a seed
    always produces the same chain.

    :returns: (3n^2 - n)/2 terms, sorted.
    """
    if n < 2:
        raise ValidationError(f'A chain needs at least 2 sites (got {n})')

    rng = np.random.Generator(np.random.Philox(field_seed))
    fields = rng.uniform(-1., 1., size=n)

    terms = []
    for i in range(n):
        for j in range(i + 1, n):
            coupling = 1. / (j - i) ** 4
            for letter in 'XYZ':
                terms.append(HamiltonianTerm(
                    coupling,
                    PauliString.from_sparse(n, {i: letter, j: letter})))
    for i, b in enumerate(fields):
        terms.append(HamiltonianTerm(float(b), PauliString.from_sparse(
            n, {i: 'Z'})))

    return PartitionedHamiltonian.from_terms(
        n, terms, source=f'heisenberg_chain(n={n}, field_seed={field_seed})')


def partition(h: PartitionedHamiltonian,
              n_d: int) -> Tuple[TermSum, List[HamiltonianTerm]]:
    """
    Splits the Hamiltonian at n_d.

    :returns: (H0, H1) where H0 sums the n_d largest terms and H1 lists the
              remaining terms in order.
    :raises ValidationError: If n_d is outside [0, L].
    """
    h = h.with_n_d(n_d)
    return (TermSum.from_terms(h.n_qubits, h.h0_terms), list(h.h1_terms))


def commutator_norm(h0: TermSum, h1: TermSum, method: Text = 'auto') -> float:
    """
    Spectral norm of [H0, H1]; zero when either side is empty.
    """
    if not h0 or not h1:
        return 0.
    return spectral_norm(h0.commutator(h1), method=method)


def bch_operator(h: PartitionedHamiltonian, n_d: int,
                 include_h0_splitting: bool = True) -> TermSum:
    """
    The leading splitting-error operator of a hybrid step::

        Q = [H1, H0] + sum over H0 pairs of [h_b, h_a]

    where the pair sum runs over the H0 terms in application order. It is
    anti-Hermitian. With ``include_h0_splitting=False`` (U0 evaluated
    exactly) only the cross commutator is kept.
    """
    h = h.with_n_d(n_d)
    if n_d == 0:
        return TermSum(h.n_qubits)

    h0 = TermSum.from_terms(h.n_qubits, h.h0_terms)
    h1 = TermSum.from_terms(h.n_qubits, h.h1_terms)
    parts = list(h1.commutator(h0))
    if include_h0_splitting:
        h0_terms = h.h0_terms
        for a in range(n_d):
            for b in range(a + 1, n_d):
                parts.extend(commutator(h0_terms[b], h0_terms[a]))
    return TermSum(h.n_qubits, parts)


def bch_constant(h: PartitionedHamiltonian, n_d: int,
                 include_h0_splitting: bool = True,
                 method: Text = 'auto') -> float:
    """
    C = ||Q^2|| / 4 for the operator of :func:`bch_operator`.

    Q is anti-Hermitian, so ||Q^2|| = ||Q||^2 and the square is never formed.
    """
    q = bch_operator(h, n_d, include_h0_splitting)
    if not q:
        return 0.
    return spectral_norm(q, method=method) ** 2 / 4.
