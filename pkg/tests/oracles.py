"""Independent dense-matrix oracles for the test suite.

Everything here is built directly from 2x2 matrices and kron products,
deliberately not reusing the package's bit-level algebra, so tests compare
two independent routes to the same answer.  Qubit 1 is the leftmost tensor
factor (most significant bit of the flat index).
"""

import numpy as np

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

BITS_MAT = {(0, 0): I2, (0, 1): X, (1, 0): Z, (1, 1): Y}
H_MAT = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
S_MAT = np.array([[1, 0], [0, 1j]], dtype=np.complex128)


def pauli_matrix(n, z, x, scale=1.0):
    """Dense i**0-phase Pauli from bit masks, times an overall scale."""
    m = np.array([[1.0]], dtype=np.complex128)
    for q in range(n):
        m = np.kron(m, BITS_MAT[(z >> q) & 1, (x >> q) & 1])
    return scale * m


def signed_matrix(p):
    return pauli_matrix(p.n, p.z, p.x, complex(p.sign))


def phased_matrix(p):
    return pauli_matrix(p.n, p.z, p.x, 1j ** p.phase_exp)


def gate_matrix(n, gate):
    kind = gate[0]
    if kind in ("H", "S"):
        one = H_MAT if kind == "H" else S_MAT
        m = np.array([[1.0]], dtype=np.complex128)
        for q in range(1, n + 1):
            m = np.kron(m, one if q == gate[1] else I2)
        return m
    if kind == "CNOT":
        c, t = gate[1], gate[2]
        dim = 1 << n
        m = np.zeros((dim, dim), dtype=np.complex128)
        for idx in range(dim):
            out = idx
            if (idx >> (n - c)) & 1:
                out ^= 1 << (n - t)
            m[out, idx] = 1.0
        return m
    raise ValueError(f"unknown gate {gate!r}")


def unitary_of_gates(n, gates):
    u = np.eye(1 << n, dtype=np.complex128)
    for g in gates:
        u = gate_matrix(n, g) @ u
    return u


def conjugate_dense(u, m):
    return u @ m @ u.conj().T


def controlled_on_ancilla(m):
    """One control qubit prepended: |0><0| (x) I + |1><1| (x) m."""
    dim = m.shape[0]
    p0 = np.diag([1.0, 0.0]).astype(np.complex128)
    p1 = np.diag([0.0, 1.0]).astype(np.complex128)
    return np.kron(p0, np.eye(dim)) + np.kron(p1, m)


def matrices_equal(a, b, tol=1e-12):
    return bool(np.max(np.abs(a - b)) <= tol)


def asap_layers(gates, conflict):
    """Quadratic reference for ASAP scheduling.

    Each gate lands one layer after the latest earlier gate it conflicts
    with; returns the list of assigned layers (max of it is the depth).
    """
    layers = []
    for i, g in enumerate(gates):
        level = 1
        for j in range(i):
            if conflict(gates[j], g):
                level = max(level, layers[j] + 1)
        layers.append(level)
    return layers
