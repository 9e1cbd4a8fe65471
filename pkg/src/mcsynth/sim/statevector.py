"""Dense statevector backend: branch enumeration for synthesized circuits.

States are flat complex128 arrays of length 2**m.  Axis k of the reshaped
(2,)*m tensor is qubit position k; the flat index therefore carries qubit 1
as its most significant bit.  For circuit simulations the joint register
puts the ancillas a1z, a1x, ..., anx at positions 0..2n-1 and the data
qubits at positions 2n..3n-1.

X-basis measurement outcomes follow the bit convention of the circuit IR:
outcome +1 (ancilla in |+>) records bit 0, outcome -1 records bit 1, and a
branch whose accumulated probability falls below ZERO_BRANCH_THRESHOLD is
reported with a ``None`` state.
"""

from __future__ import annotations

from itertools import chain, product

import numpy as np

from ..circuit import Circuit, outcome_index
from ..pauli import PhasedPauli, SignedPauli
from ..tableau import Tableau, conjugate

ZERO_BRANCH_THRESHOLD = 1e-12

_H_GATE = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_S_GATE = np.array([[1, 0], [0, 1j]], dtype=np.complex128)


class SimulationIntegrityError(RuntimeError):
    """Internal bookkeeping of a simulation produced an inconsistent state."""


def num_qubits(psi: np.ndarray) -> int:
    m = int(psi.size).bit_length() - 1
    if psi.size != 1 << m:
        raise ValueError(f"state length {psi.size} is not a power of two")
    return m


def _require_normalized(psi: np.ndarray):
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized (norm {norm!r})")


def basis_index(n: int, xmask: int) -> int:
    """Flat index of the basis state X**xmask |0...0> (qubit 1 = MSB)."""
    idx = 0
    for j in range(n):
        if (xmask >> j) & 1:
            idx |= 1 << (n - 1 - j)
    return idx


# -- elementary operations on tensors ----------------------------------------

def _apply_1q(tensor: np.ndarray, gate: np.ndarray, axis: int):
    moved = np.moveaxis(tensor, axis, 0)
    moved[...] = np.tensordot(gate, moved, axes=([1], [0]))


def _swap_axis_halves(tensor: np.ndarray, axis: int):
    i0 = [slice(None)] * tensor.ndim
    i1 = [slice(None)] * tensor.ndim
    i0[axis] = 0
    i1[axis] = 1
    i0, i1 = tuple(i0), tuple(i1)
    tmp = tensor[i0].copy()
    tensor[i0] = tensor[i1]
    tensor[i1] = tmp


def _negate_axis_one(tensor: np.ndarray, axis: int):
    idx = [slice(None)] * tensor.ndim
    idx[axis] = 1
    tensor[tuple(idx)] *= -1


def _apply_pauli_axes(tensor: np.ndarray, z: int, x: int, scale: complex, axes):
    """In-place P(z, x) on the given axes, times an overall scale.

    Per qubit the Z factor acts before the X factor, so a Y contributes the
    extra factor i fixed by Y = i * X @ Z.
    """
    for q, axis in enumerate(axes):
        zb = (z >> q) & 1
        xb = (x >> q) & 1
        if zb:
            _negate_axis_one(tensor, axis)
        if xb:
            _swap_axis_halves(tensor, axis)
        if zb and xb:
            scale *= 1j
    if scale != 1:
        tensor *= scale


def apply_pauli(psi: np.ndarray, p) -> np.ndarray:
    """P |psi> for a SignedPauli or PhasedPauli on the whole register."""
    m = num_qubits(psi)
    if p.n != m:
        raise ValueError(f"Pauli acts on {p.n} qubits, state has {m}")
    scale = (1j ** p.phase_exp) if isinstance(p, PhasedPauli) else complex(p.sign)
    out = psi.astype(np.complex128).reshape((2,) * m).copy()
    _apply_pauli_axes(out, p.z, p.x, scale, range(m))
    return out.reshape(-1)


def apply_gates(psi: np.ndarray, gates) -> np.ndarray:
    """Dense application of an H/S/CNOT gate list (1-based qubits)."""
    m = num_qubits(psi)
    out = psi.astype(np.complex128).reshape((2,) * m).copy()
    for g in gates:
        kind = g[0]
        if kind == "H":
            _apply_1q(out, _H_GATE, g[1] - 1)
        elif kind == "S":
            _apply_1q(out, _S_GATE, g[1] - 1)
        elif kind == "CNOT":
            c_axis, t_axis = g[1] - 1, g[2] - 1
            idx = [slice(None)] * m
            idx[c_axis] = 1
            sub = out[tuple(idx)]
            _swap_axis_halves(sub, t_axis if t_axis < c_axis else t_axis - 1)
        else:
            raise ValueError(f"unknown gate kind {kind!r}")
    return out.reshape(-1)


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff |<a|b>| >= 1 - tol."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return abs(np.vdot(a, b)) >= 1.0 - tol


def random_state(n: int, seed) -> np.ndarray:
    """Haar-ish random pure state from a seeded complex Gaussian."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return v / np.linalg.norm(v)


# -- joint-register circuit simulation ----------------------------------------

def _joint_state(c: Circuit, psi: np.ndarray) -> np.ndarray:
    n = c.n_data
    if num_qubits(psi) != n:
        raise ValueError(f"state has {num_qubits(psi)} qubits, circuit has {n}")
    _require_normalized(psi)
    plus = np.full(1 << (2 * n), 0.5 ** n, dtype=np.complex128)
    return np.outer(plus, psi.astype(np.complex128)).reshape((2,) * (3 * n))


def _apply_controlled(joint: np.ndarray, c: Circuit, gate):
    n = c.n_data
    ctrl_axis = outcome_index(gate.control)
    idx = [slice(None)] * joint.ndim
    idx[ctrl_axis] = 1
    sub = joint[tuple(idx)]
    # data axes sit above every ancilla axis, so they shift down by one
    payload = gate.payload
    _apply_pauli_axes(sub, payload.z, payload.x, complex(payload.sign),
                      range(2 * n - 1, 3 * n - 1))


def _contract_ancillas(joint: np.ndarray, n: int, u) -> np.ndarray:
    """Project out the measured ancillas, verifying they are separable."""
    data = joint
    for k in reversed(range(2 * n)):
        sigma = -1.0 if u[k] else 1.0
        vec = np.array([1.0, sigma], dtype=np.complex128) / np.sqrt(2)
        data = np.tensordot(vec.conj(), data, axes=([0], [k]))
    norm = np.linalg.norm(data)
    if abs(norm - 1.0) > 1e-9:
        raise SimulationIntegrityError(
            f"ancilla register is not separable after measurement (residual "
            f"norm {norm!r})")
    return (data / norm).reshape(-1)


def _apply_corrections(data: np.ndarray, c: Circuit, u) -> np.ndarray:
    tensor = data.reshape((2,) * c.n_data)
    for g in c.correct:
        if u[outcome_index(g.bit)]:
            if g.correction == "X":
                _swap_axis_halves(tensor, g.qubit - 1)
            else:
                _negate_axis_one(tensor, g.qubit - 1)
    return tensor.reshape(-1)


def run_branch(c: Circuit, psi: np.ndarray, u):
    """Simulate one measurement branch of the circuit.

    Every X-basis measurement is replaced by the projector (I +/- X)/2
    selected by the matching bit of u.  Returns (probability, data state);
    the state is None when the branch probability falls below
    ZERO_BRANCH_THRESHOLD.
    """
    n = c.n_data
    u = tuple(u)
    if len(u) != 2 * n:
        raise ValueError(f"outcome vector needs {2 * n} bits, got {len(u)}")
    joint = _joint_state(c, psi)
    for g in chain(c.cpn, c.cp1):
        _apply_controlled(joint, c, g)
    prob = 1.0
    for g in c.measure:
        axis = outcome_index(g.ancilla)
        sigma = -1.0 if u[outcome_index(g.bit)] else 1.0
        i0 = [slice(None)] * joint.ndim
        i1 = [slice(None)] * joint.ndim
        i0[axis] = 0
        i1[axis] = 1
        i0, i1 = tuple(i0), tuple(i1)
        projected = (joint[i0] + sigma * joint[i1]) / 2
        joint[i0] = projected
        joint[i1] = sigma * projected
        p_k = float(np.linalg.norm(joint) ** 2)
        prob *= p_k
        if prob < ZERO_BRANCH_THRESHOLD:
            return prob, None
        joint /= np.sqrt(p_k)
    data = _contract_ancillas(joint, n, u)
    return prob, _apply_corrections(data, c, u)


def run_all_branches(c: Circuit, psi: np.ndarray):
    """Enumerate every outcome vector of the circuit on the given input.

    Returns a list of (u, probability, data state or None), one entry per
    u in lexicographic order; probabilities sum to 1.
    """
    n = c.n_data
    if n > 6:
        raise ValueError(f"branch enumeration is limited to n <= 6, got {n}")
    joint = _joint_state(c, psi)
    for g in chain(c.cpn, c.cp1):
        _apply_controlled(joint, c, g)
    for axis in range(2 * n):    # rotate ancillas so index = X-basis outcome
        _apply_1q(joint, _H_GATE, axis)
    results = []
    total = 0.0
    for u in product((0, 1), repeat=2 * n):
        v = joint[u]
        p = float(np.linalg.norm(v) ** 2)
        total += p
        if p < ZERO_BRANCH_THRESHOLD:
            results.append((u, p, None))
            continue
        state = (v / np.sqrt(p)).reshape(-1).copy()
        results.append((u, p, _apply_corrections(state, c, u)))
    if abs(total - 1.0) > 1e-10:
        raise SimulationIntegrityError(
            f"branch probabilities sum to {total!r}, expected 1")
    return results


def sample_run(c: Circuit, psi: np.ndarray, seed):
    """Sample one run of the circuit, measuring ancillas in circuit order.

    Deterministic in the seed; returns (outcome vector, data state).
    """
    n = c.n_data
    if n > 12:
        raise ValueError(f"sampling is limited to n <= 12, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    joint = _joint_state(c, psi)
    for g in chain(c.cpn, c.cp1):
        _apply_controlled(joint, c, g)
    u = [0] * (2 * n)
    for g in c.measure:
        axis = outcome_index(g.ancilla)
        i0 = [slice(None)] * joint.ndim
        i1 = [slice(None)] * joint.ndim
        i0[axis] = 0
        i1[axis] = 1
        i0, i1 = tuple(i0), tuple(i1)
        plus_branch = (joint[i0] + joint[i1]) / 2
        p_plus = float(np.linalg.norm(plus_branch) ** 2) * 2
        bit = 0 if rng.random() < p_plus else 1
        sigma = -1.0 if bit else 1.0
        projected = (joint[i0] + sigma * joint[i1]) / 2
        joint[i0] = projected
        joint[i1] = sigma * projected
        joint /= np.linalg.norm(joint)
        u[outcome_index(g.bit)] = bit
    data = _contract_ancillas(joint, n, u)
    return tuple(u), _apply_corrections(data, c, u)


# -- dense Clifford reconstruction from a tableau -------------------------------

def _base_state(t: Tableau) -> np.ndarray:
    """C|0...0>: the stabilizer state fixed by the tableau's Z rows."""
    n = t.n
    dim = 1 << n
    for b in range(dim):
        v = np.zeros(dim, dtype=np.complex128)
        v[b] = 1.0
        for i in range(1, n + 1):
            v = (v + apply_pauli(v, t.z_row(i))) / 2
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            return v / norm
    raise SimulationIntegrityError(
        "no basis state overlaps the stabilizer state; tableau is corrupt")


def tableau_apply(t: Tableau, psi: np.ndarray) -> np.ndarray:
    """C |psi> for the Clifford described by the tableau.

    Columns are generated as C X**b |0...0> = (C X**b C^) C|0...0>, so the
    result is exact up to one overall phase common to every input.
    """
    n = t.n
    if num_qubits(psi) != n:
        raise ValueError(f"state has {num_qubits(psi)} qubits, tableau has {n}")
    base = _base_state(t)
    out = np.zeros_like(base)
    for xmask in range(1 << n):
        amp = psi[basis_index(n, xmask)]
        if amp != 0:
            img = conjugate(t, PhasedPauli(n, 0, xmask))
            out += amp * apply_pauli(base, img)
    return out


def tableau_unitary(t: Tableau) -> np.ndarray:
    """Dense unitary of the tableau's Clifford (up to one global phase)."""
    n = t.n
    if n > 10:
        raise ValueError(f"dense reconstruction is limited to n <= 10, got {n}")
    base = _base_state(t)
    dim = 1 << n
    u_mat = np.empty((dim, dim), dtype=np.complex128)
    for xmask in range(dim):
        img = conjugate(t, PhasedPauli(n, 0, xmask))
        u_mat[:, basis_index(n, xmask)] = apply_pauli(base, img)
    return u_mat
