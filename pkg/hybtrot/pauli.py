#!/usr/bin/env python
# hybtrot/pauli.py - Pauli string algebra and dense oracles
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
Exact algebra on Pauli strings.

A :class:`PauliString` is stored as a pair of bit masks (``x``, ``z``) over the
qubits, with qubit 0 in the least significant bit. The letter on a qubit is
``I`` (0, 0), ``X`` (1, 0), ``Z`` (0, 1) or ``Y`` (1, 1). Products carry their
phase as a power of ``i`` (:class:`Phase`), so the algebra layer never
accumulates floating point error.

Dense matrices use the same convention: qubit ``k`` is bit ``k`` of the basis
state index.
"""

from __future__ import absolute_import
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
import logging
import re
from typing import (
    Dict, Iterable, Iterator, Mapping, Optional, Text, Tuple, Union)

import numpy as np
from scipy import linalg

from hybtrot.common import (
    DENSE_QUBIT_CAP, POWER_ITERATION_MAX_STEPS, POWER_ITERATION_TOLERANCE,
    NumericalError, ValidationError, check_qubits, check_same_qubits)

__all__ = [
    'Phase',
    'PauliString',
    'HamiltonianTerm',
    'TermSum',
    'multiply',
    'commutes',
    'commutator',
    'to_dense',
    'spectral_norm',
    'apply_term_sum',
    'pauli_action',
]

logger = logging.getLogger(__name__)

# letter -> (x bit, z bit)
_LETTER_BITS = {'I': (0, 0), 'X': (1, 0), 'Y': (1, 1), 'Z': (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}

# (a, b) -> power of i in a.b = i^k c
_SITE_PHASE = {
    ('X', 'Y'): 1, ('Y', 'X'): 3,
    ('Y', 'Z'): 1, ('Z', 'Y'): 3,
    ('Z', 'X'): 1, ('X', 'Z'): 3,
}

_OP_RE = re.compile(r'^([XYZ])(\d+)$')


class Phase(IntEnum):
    """A fourth root of unity, stored as the power of i."""
    PLUS_ONE = 0
    PLUS_I = 1
    MINUS_ONE = 2
    MINUS_I = 3

    @property
    def complex(self) -> complex:
        return (1, 1j, -1, -1j)[self]

    def times(self, other: int) -> Phase:
        return Phase((int(self) + int(other)) % 4)


def _popcount(v: int) -> int:
    return bin(v).count('1')


@dataclass(frozen=True)
class PauliString:
    """
    A tensor product of single-qubit Pauli operators.

    Use :meth:`parse`, :meth:`from_label` or :meth:`identity` rather than the
    raw mask constructor.
    """
    n_qubits: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValidationError(
                f'A Pauli string needs at least 1 qubit (got {self.n_qubits})')
        if (self.x | self.z) >> self.n_qubits:
            raise ValidationError(
                f'Pauli masks address qubits beyond {self.n_qubits}')

    @classmethod
    def identity(cls, n_qubits: int) -> PauliString:
        return cls(n_qubits)

    @classmethod
    def from_label(cls, label: Text) -> PauliString:
        """
        Builds a string from a dense label, qubit 0 first (``"XIZ"`` is
        X on qubit 0 and Z on qubit 2).
        """
        x = z = 0
        for q, letter in enumerate(label):
            try:
                xb, zb = _LETTER_BITS[letter]
            except KeyError:
                raise ValidationError(
                    f'Invalid Pauli letter {letter!r} in {label!r}') from None
            x |= xb << q
            z |= zb << q
        return cls(len(label), x, z)

    @classmethod
    def from_sparse(cls, n_qubits: int,
                    letters: Mapping[int, Text]) -> PauliString:
        """Builds a string from a {qubit: letter} mapping."""
        x = z = 0
        for q, letter in letters.items():
            if not 0 <= q < n_qubits:
                raise ValidationError(
                    f'Qubit index {q} out of range for {n_qubits} qubits')
            try:
                xb, zb = _LETTER_BITS[letter]
            except KeyError:
                raise ValidationError(
                    f'Invalid Pauli letter {letter!r}') from None
            x |= xb << q
            z |= zb << q
        return cls(n_qubits, x, z)

    @classmethod
    def parse(cls, n_qubits: int, text: Text) -> PauliString:
        """
        Parses the sparse form used in Hamiltonian files, eg: ``"X0 Y1 Z3"``.
        An empty string (or ``"I"``) is the identity.
        """
        letters = {}  # type: Dict[int, Text]
        for op in text.split():
            if op == 'I':
                continue
            m = _OP_RE.match(op)
            if not m:
                raise ValidationError(f'Invalid Pauli operator {op!r}')
            q = int(m.group(2))
            if q in letters:
                raise ValidationError(f'Qubit {q} appears twice in {text!r}')
            letters[q] = m.group(1)
        return cls.from_sparse(n_qubits, letters)

    def letter(self, qubit: int) -> Text:
        return _BITS_LETTER[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    @property
    def label(self) -> Text:
        """Dense label, qubit 0 first."""
        return ''.join(self.letter(q) for q in range(self.n_qubits))

    @property
    def support(self) -> Tuple[int, ...]:
        m = self.x | self.z
        return tuple(q for q in range(self.n_qubits) if (m >> q) & 1)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def n_y(self) -> int:
        return _popcount(self.x & self.z)

    @property
    def is_identity(self) -> bool:
        return not (self.x | self.z)

    def sort_key(self) -> Text:
        return self.label

    def __str__(self):
        if self.is_identity:
            return 'I'
        return ' '.join(f'{self.letter(q)}{q}' for q in self.support)

    def __repr__(self):
        return f'PauliString({self.n_qubits}, {str(self)!r})'


def multiply(p: PauliString, q: PauliString) -> Tuple[Phase, PauliString]:
    """
    Multiplies two Pauli strings.

    :returns: (phase, r) such that phase * r == p . q exactly.
    :raises ValidationError: If the qubit counts differ.
    """
    check_same_qubits(p.n_qubits, q.n_qubits)
    power = 0
    overlap = (p.x | p.z) & (q.x | q.z)
    while overlap:
        bit = overlap & -overlap
        site = bit.bit_length() - 1
        power += _SITE_PHASE.get((p.letter(site), q.letter(site)), 0)
        overlap ^= bit
    return Phase(power % 4), PauliString(p.n_qubits, p.x ^ q.x, p.z ^ q.z)


def commutes(p: PauliString, q: PauliString) -> bool:
    """
    True if the two strings commute, that is when the number of sites where
    both letters are non-identity and different is even.
    """
    check_same_qubits(p.n_qubits, q.n_qubits)
    return _popcount((p.x & q.z) ^ (p.z & q.x)) % 2 == 0


@dataclass(frozen=True)
class HamiltonianTerm:
    """A real coefficient times a Pauli string."""
    coeff: float
    pauli: PauliString

    @property
    def n_qubits(self) -> int:
        return self.pauli.n_qubits

    @property
    def norm(self) -> float:
        """Spectral norm; Pauli strings are unitary involutions."""
        return abs(self.coeff)

    def scaled(self, factor: float) -> HamiltonianTerm:
        return HamiltonianTerm(self.coeff * factor, self.pauli)

    def __str__(self):
        return f'{self.coeff!r} {self.pauli}'


class TermSum:
    """
    A canonical linear combination of Pauli strings with complex coefficients.

    Duplicate strings are merged, exact zeros dropped, and the entries are
    ordered by the dense label of the string. Instances are immutable.
    """

    __slots__ = ('_n_qubits', '_terms')

    def __init__(self, n_qubits: int,
                 terms: Iterable[Tuple[complex, PauliString]] = ()):
        merged = {}  # type: Dict[PauliString, complex]
        for coeff, pauli in terms:
            check_same_qubits(n_qubits, pauli.n_qubits)
            merged[pauli] = merged.get(pauli, 0j) + complex(coeff)
        self._n_qubits = n_qubits
        self._terms = tuple(
            (c, p) for p, c in sorted(merged.items(),
                                      key=lambda i: i[0].sort_key())
            if c != 0)

    @classmethod
    def from_terms(cls, n_qubits: int,
                   terms: Iterable[HamiltonianTerm]) -> TermSum:
        return cls(n_qubits, ((t.coeff, t.pauli) for t in terms))

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.) -> TermSum:
        return cls(n_qubits, [(coeff, PauliString.identity(n_qubits))])

    @property
    def n_qubits(self) -> int:
        return self._n_qubits

    @property
    def terms(self) -> Tuple[Tuple[complex, PauliString], ...]:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[complex, PauliString]]:
        return iter(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, TermSum):
            return NotImplemented
        return (self._n_qubits == other._n_qubits and
                self._terms == other._terms)

    def __hash__(self):
        return hash((self._n_qubits, self._terms))

    def coefficient(self, pauli: PauliString) -> complex:
        for c, p in self._terms:
            if p == pauli:
                return c
        return 0j

    def __add__(self, other: TermSum) -> TermSum:
        check_same_qubits(self._n_qubits, other.n_qubits)
        return TermSum(self._n_qubits, self._terms + other.terms)

    def __sub__(self, other: TermSum) -> TermSum:
        return self + other.scale(-1)

    def __neg__(self) -> TermSum:
        return self.scale(-1)

    def scale(self, factor: complex) -> TermSum:
        return TermSum(self._n_qubits,
                       ((c * factor, p) for c, p in self._terms))

    def __mul__(self, other: Union[TermSum, complex, float]) -> TermSum:
        if not isinstance(other, TermSum):
            return self.scale(other)
        check_same_qubits(self._n_qubits, other.n_qubits)
        out = []
        for ca, pa in self._terms:
            for cb, pb in other.terms:
                phase, r = multiply(pa, pb)
                out.append((ca * cb * phase.complex, r))
        return TermSum(self._n_qubits, out)

    def __rmul__(self, other: Union[complex, float]) -> TermSum:
        return self.scale(other)

    def adjoint(self) -> TermSum:
        return TermSum(self._n_qubits,
                       ((c.conjugate(), p) for c, p in self._terms))

    def _scale_of(self) -> float:
        return max((abs(c) for c, _ in self._terms), default=0.)

    def is_hermitian(self, rtol: float = 1e-12) -> bool:
        tol = rtol * self._scale_of()
        return all(abs(c.imag) <= tol for c, _ in self._terms)

    def is_antihermitian(self, rtol: float = 1e-12) -> bool:
        tol = rtol * self._scale_of()
        return all(abs(c.real) <= tol for c, _ in self._terms)

    def commutator(self, other: TermSum) -> TermSum:
        """[self, other] computed pairwise on the Pauli strings."""
        check_same_qubits(self._n_qubits, other.n_qubits)
        out = []
        for ca, pa in self._terms:
            for cb, pb in other.terms:
                if commutes(pa, pb):
                    continue
                phase, r = multiply(pa, pb)
                out.append((2 * ca * cb * phase.complex, r))
        return TermSum(self._n_qubits, out)

    def __str__(self):
        if not self._terms:
            return '0'
        return ' + '.join(f'({c:g}) {p}' for c, p in self._terms)

    def __repr__(self):
        return f'<TermSum n_qubits={self._n_qubits} terms={len(self)}>'


def commutator(a: HamiltonianTerm, b: HamiltonianTerm) -> TermSum:
    """
    Exact commutator [a, b] = ab - ba of two Hamiltonian terms.

    Commuting strings give an empty sum; anticommuting strings give the single
    entry 2 a.coeff b.coeff phase (a.pauli b.pauli), which is anti-Hermitian.
    """
    check_same_qubits(a.n_qubits, b.n_qubits)
    if commutes(a.pauli, b.pauli):
        return TermSum(a.n_qubits)
    phase, r = multiply(a.pauli, b.pauli)
    return TermSum(a.n_qubits, [(2 * a.coeff * b.coeff * phase.complex, r)])


@lru_cache(maxsize=512)
def _action(n_qubits: int, x: int, z: int) -> Tuple[np.ndarray, np.ndarray]:
    index = np.arange(1 << n_qubits, dtype=np.int64)
    perm = index ^ x
    parity = np.zeros_like(index)
    masked = perm & z
    q = 0
    while z >> q:
        if (z >> q) & 1:
            parity ^= (masked >> q) & 1
        q += 1
    phases = (1j ** _popcount(x & z)) * (1 - 2 * parity)
    phases = phases.astype(np.complex128)
    perm.setflags(write=False)
    phases.setflags(write=False)
    return perm, phases


def pauli_action(p: PauliString) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns (perm, phases) such that (P v)[k] == phases[k] * v[perm[k]].

    The arrays are cached and read-only.
    """
    return _action(p.n_qubits, p.x, p.z)


def apply_term_sum(s: TermSum, vec: np.ndarray) -> np.ndarray:
    """Applies a TermSum to a vector without building a matrix."""
    if vec.shape != (1 << s.n_qubits,):
        raise ValidationError(
            f'Vector of shape {vec.shape} does not match {s.n_qubits} qubits')
    out = np.zeros_like(vec, dtype=np.complex128)
    for c, p in s:
        perm, phases = pauli_action(p)
        out += c * phases * vec[perm]
    return out


def to_dense(s: Union[TermSum, HamiltonianTerm, PauliString],
             n_qubits: Optional[int] = None,
             cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """
    Builds the dense 2^n x 2^n matrix of a TermSum.

    :param n_qubits: Register size; defaults to the size of ``s``.
    :param cap: Largest register allowed.
    :raises ValidationError: If the register is above the dense cap.
    """
    if isinstance(s, PauliString):
        s = TermSum(s.n_qubits, [(1., s)])
    elif isinstance(s, HamiltonianTerm):
        s = TermSum.from_terms(s.n_qubits, [s])
    if n_qubits is None:
        n_qubits = s.n_qubits
    check_same_qubits(n_qubits, s.n_qubits)
    check_qubits(n_qubits, cap)

    dim = 1 << n_qubits
    out = np.zeros((dim, dim), dtype=np.complex128)
    cols = np.arange(dim)
    for c, p in s:
        perm, phases = pauli_action(p)
        # P[k, perm[k]] = phases[k]
        out[cols, perm] += c * phases
    return out


def spectral_norm(s: TermSum, method: Text = 'auto',
                  cap: int = DENSE_QUBIT_CAP,
                  tol: float = POWER_ITERATION_TOLERANCE,
                  max_steps: int = POWER_ITERATION_MAX_STEPS) -> float:
    """
    Largest singular value of a Hermitian or anti-Hermitian TermSum.

    :param method: ``dense`` (eigendecomposition), ``power`` (matrix-free
                   power iteration on s^dagger s) or ``auto`` (dense up to
                   the cap).
    :raises ValidationError: If ``s`` is neither Hermitian nor anti-Hermitian.
    :raises NumericalError: If power iteration does not converge.
    """
    if not s:
        return 0.
    hermitian = s.is_hermitian()
    if not hermitian and not s.is_antihermitian():
        raise ValidationError(
            'spectral_norm requires a Hermitian or anti-Hermitian TermSum')

    if len(s) == 1:
        return abs(s.terms[0][0])

    if method == 'auto':
        method = 'dense' if s.n_qubits <= cap else 'power'

    if method == 'dense':
        m = to_dense(s, cap=cap)
        if not hermitian:
            m = 1j * m
        w = linalg.eigvalsh(m)
        return float(np.max(np.abs(w)))
    elif method == 'power':
        return _power_norm(s, tol, max_steps)
    raise ValidationError(f'Unknown spectral norm method {method!r}')


def _power_norm(s: TermSum, tol: float, max_steps: int) -> float:
    adj = s.adjoint()
    rng = np.random.default_rng(0x5eed)
    dim = 1 << s.n_qubits
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)

    residual = float('inf')
    for step in range(max_steps):
        w = apply_term_sum(adj, apply_term_sum(s, v))
        mu = float(np.vdot(v, w).real)
        if mu <= 0:
            return 0.
        residual = float(np.linalg.norm(w - mu * v)) / mu
        if residual <= tol:
            logger.debug('power iteration converged after %d steps', step + 1)
            return float(np.sqrt(mu))
        v = w / np.linalg.norm(w)

    raise NumericalError(
        f'Power iteration did not converge in {max_steps} steps '
        f'(relative residual {residual:.3e})')


def pauli_sum_from_dict(n_qubits: int,
                        coeffs: Mapping[Text, complex]) -> TermSum:
    """Convenience constructor from {sparse label: coefficient}."""
    return TermSum(n_qubits, ((c, PauliString.parse(n_qubits, k))
                              for k, c in coeffs.items()))
