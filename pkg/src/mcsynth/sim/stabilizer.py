"""Stabilizer-group simulation of synthesized circuits (large n).

Tracks destabilizer/stabilizer generator pairs for the joint register (2n
ancillas + n data qubits) through ancilla preparation, controlled Paulis,
X-basis measurements with seeded random outcomes, and classical corrections.
Rows are (z, x, phase_exp) integer triples over the joint register; position
k < 2n is ancilla k of the outcome order, positions 2n..3n-1 are the data
qubits.

A controlled Pauli with control a and Hermitian payload P conjugates a
generator G as follows: if G carries an X factor on a, left-multiply the
data part by P; if the data part of G anticommutes with P, right-multiply
by Z_a.  Both updates together keep G Hermitian; the phase arithmetic is
the shared Pauli product rule.
"""

from __future__ import annotations

import numpy as np

from ..circuit import Circuit, outcome_index
from ..pauli import SignedPauli, raw_product
from .statevector import SimulationIntegrityError


class _JointState:
    """Aaronson-Gottesman style destabilizer/stabilizer pair tracking."""

    def __init__(self, m: int):
        self.m = m
        self.rows = []   # destabilizers first, then stabilizers, each [z, x, e]
        for j in range(m):
            self.rows.append([0, 1 << j, 0])
        for j in range(m):
            self.rows.append([1 << j, 0, 0])

    def _stab(self, j: int):
        return self.rows[self.m + j]

    def hadamard(self, q: int):
        bit = 1 << q
        for row in self.rows:
            z, x = row[0], row[1]
            zb, xb = z & bit, x & bit
            if zb and xb:
                row[2] ^= 2
            elif zb or xb:
                row[0] = z ^ bit
                row[1] = x ^ bit

    def controlled_pauli(self, ctrl: int, pz: int, px: int, pe: int):
        bit = 1 << ctrl
        for row in self.rows:
            z, x, e = row
            anti = ((z & px).bit_count() + (x & pz).bit_count()) & 1
            if x & bit:
                z, x, e = raw_product(pz, px, pe, z, x, e)
            if anti:
                z, x, e = raw_product(z, x, e, bit, 0, 0)
            if e & 1:
                raise SimulationIntegrityError(
                    "controlled-Pauli update produced a non-Hermitian generator")
            row[0], row[1], row[2] = z, x, e

    def pauli_frame(self, uz: int, ux: int):
        """Conjugate by a Hermitian Pauli: flip signs of anticommuting rows."""
        for row in self.rows:
            if ((row[0] & ux).bit_count() + (row[1] & uz).bit_count()) & 1:
                row[2] ^= 2

    def measure_x(self, q: int, rng) -> int:
        """X-basis measurement on qubit q; returns the recorded bit."""
        bit = 1 << q
        m = self.m
        pivot = None
        for j in range(m):
            if self._stab(j)[0] & bit:   # z bit set -> anticommutes with X_q
                pivot = j
                break
        if pivot is not None:
            pz, px, pe = self._stab(pivot)
            for idx, row in enumerate(self.rows):
                if idx == pivot or idx == m + pivot:
                    continue
                if row[0] & bit:
                    row[0], row[1], row[2] = raw_product(
                        pz, px, pe, row[0], row[1], row[2])
                    if row[2] & 1:
                        raise SimulationIntegrityError(
                            "measurement update produced a non-Hermitian generator")
            outcome = int(rng.integers(0, 2))
            self.rows[pivot] = [pz, px, pe]
            self.rows[m + pivot] = [0, bit, 2 if outcome else 0]
            return outcome
        # Deterministic: +/-X_q is a product of stabilizers, picked out by the
        # destabilizers that anticommute with X_q.
        z = x = e = 0
        for j in range(m):
            if self.rows[j][0] & bit:
                sz, sx, se = self._stab(j)
                z, x, e = raw_product(z, x, e, sz, sx, se)
        if z != 0 or x != bit or e & 1:
            raise SimulationIntegrityError(
                "deterministic X measurement did not resolve to +/-X")
        return 0 if e == 0 else 1


def stabilizer_run(c: Circuit, seed) -> list:
    """Run the circuit on data input |0...0> with seeded measurement outcomes.

    Returns the n signed Pauli generators stabilizing the data register after
    the measured ancillas are discarded.
    """
    n = c.n_data
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    state = _JointState(3 * n)
    for g in c.prep:
        state.hadamard(outcome_index(g.ancilla))
    for g in c.cpn + c.cp1:
        payload = g.payload
        state.controlled_pauli(outcome_index(g.control),
                               payload.z << (2 * n), payload.x << (2 * n),
                               0 if payload.sign == 1 else 2)
    outcomes = {}
    for g in c.measure:
        outcomes[g.bit] = state.measure_x(outcome_index(g.ancilla), rng)
    for g in c.correct:
        if outcomes[g.bit]:
            q = 2 * n + g.qubit - 1
            if g.correction == "X":
                state.pauli_frame(0, 1 << q)
            else:
                state.pauli_frame(1 << q, 0)
    return _data_generators(state, n)


def _data_generators(state: _JointState, n: int) -> list:
    """Eliminate ancilla support from the stabilizers and restrict to data."""
    m = state.m
    rows = [list(state.rows[m + j]) for j in range(m)]
    used = [False] * m
    for a in range(2 * n):
        bit = 1 << a
        pivot = None
        for j in range(m):
            if not used[j] and rows[j][1] & bit:
                if rows[j][0] & bit:
                    raise SimulationIntegrityError(
                        "stabilizer anticommutes with a measured ancilla")
                pivot = j
                break
        if pivot is None:
            raise SimulationIntegrityError(
                f"no stabilizer fixes measured ancilla position {a}")
        pz, px, pe = rows[pivot]
        for j in range(m):
            if j != pivot and not used[j] and rows[j][1] & bit:
                rows[j][:] = raw_product(pz, px, pe, *rows[j])
        used[pivot] = True
    ancilla_mask = (1 << (2 * n)) - 1
    out = []
    for j in range(m):
        if used[j]:
            continue
        z, x, e = rows[j]
        if (z & ancilla_mask) or (x & ancilla_mask) or (e & 1):
            raise SimulationIntegrityError(
                "residual ancilla support after elimination")
        out.append(SignedPauli(n, z >> (2 * n), x >> (2 * n), 1 if e == 0 else -1))
    if len(out) != n:
        raise SimulationIntegrityError(
            f"expected {n} data generators, found {len(out)}")
    return out


# -- stabilizer-group comparison ---------------------------------------------

def _echelon_basis(gens) -> list:
    """(pivot mask, z, x, e) rows in echelon form over the (z|x) key bits."""
    basis = []
    for g in gens:
        n = g.n
        z, x, e = g.z, g.x, (0 if g.sign == 1 else 2)
        key = (z << n) | x
        for pk, bz, bx, be in basis:
            if key & pk:
                z, x, e = raw_product(bz, bx, be, z, x, e)
                key = (z << n) | x
        if key:
            basis.append((1 << (key.bit_length() - 1), z, x, e))
            basis.sort(key=lambda t: -t[0])
    return basis


def group_contains(gens, candidate: SignedPauli) -> bool:
    """Exact membership (bits and sign) in the group generated by `gens`."""
    n = candidate.n
    basis = _echelon_basis(gens)
    z, x, e = candidate.z, candidate.x, (0 if candidate.sign == 1 else 2)
    key = (z << n) | x
    for pk, bz, bx, be in basis:
        if key & pk:
            z, x, e = raw_product(bz, bx, be, z, x, e)
            key = (z << n) | x
    return key == 0 and e == 0


def groups_match(gens_a, gens_b) -> bool:
    """True iff both signed generator lists generate the same group."""
    basis_a = _echelon_basis(gens_a)
    basis_b = _echelon_basis(gens_b)
    if len(basis_a) != len(basis_b):
        return False

    def contained(basis, items):
        for g in items:
            n = g.n
            z, x, e = g.z, g.x, (0 if g.sign == 1 else 2)
            key = (z << n) | x
            for pk, bz, bx, be in basis:
                if key & pk:
                    z, x, e = raw_product(bz, bx, be, z, x, e)
                    key = (z << n) | x
            if key != 0 or e != 0:
                return False
        return True

    return contained(basis_a, gens_b) and contained(basis_b, gens_a)
