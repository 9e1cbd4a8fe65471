"""Density-matrix tools and the single-qubit measurement-filter check.

The filter wraps an arbitrary channel on one data qubit between two |+>
ancillas: controlled-Z then controlled-X before the channel, mirrored after
it, X-basis measurement of both ancillas, and the Pauli correction
X**u0 Z**u1 selected by the outcome bits (u0 from the Z-control ancilla).
For any trace-preserving channel the data qubit comes back exactly, which is
what :func:`filter_identity_check` verifies numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

PAULI_1Q = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Finite Kraus decomposition of a channel on a 2**m dimensional system."""

    elements: tuple

    def __post_init__(self):
        if not self.elements:
            raise ValueError("channel needs at least one Kraus element")
        dim = self.elements[0].shape[0]
        for e in self.elements:
            if e.shape != (dim, dim):
                raise ValueError("Kraus elements must be square and equal-sized")

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


def completeness_residual(ch: KrausChannel) -> float:
    """Operator-norm distance of sum(E^ E) from the identity."""
    acc = sum(e.conj().T @ e for e in ch.elements)
    return float(np.linalg.norm(acc - np.eye(ch.dim), ord=2))


def apply_channel(rho: np.ndarray, ch: KrausChannel) -> np.ndarray:
    return sum(e @ rho @ e.conj().T for e in ch.elements)


def random_channel(num_kraus: int, seed) -> KrausChannel:
    """Random single-qubit channel with `num_kraus` elements.

    Built from a Gaussian random isometry (orthonormalized columns) split
    into 2x2 blocks, so completeness holds to float accuracy by construction.
    """
    if not 1 <= num_kraus <= 4:
        raise ValueError(f"single-qubit channels support 1..4 Kraus elements, "
                         f"got {num_kraus}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = rng.normal(size=(2 * num_kraus, 2)) + 1j * rng.normal(size=(2 * num_kraus, 2))
    q, _ = np.linalg.qr(g)
    elements = tuple(q[2 * k:2 * k + 2, :].copy() for k in range(num_kraus))
    return KrausChannel(elements)


def random_density_matrix(dim: int, seed) -> np.ndarray:
    """Full-rank random density matrix (normalized Wishart)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum())


def pauli_label_matrix(label: str) -> np.ndarray:
    m = np.array([[1.0]], dtype=np.complex128)
    for ch in label:
        m = np.kron(m, PAULI_1Q[ch])
    return m


def pauli_coefficients(op: np.ndarray) -> dict:
    """Expansion coefficients of an operator in the Pauli basis.

    Returns {label: trace(P_label @ op) / 2**m} with one entry per m-qubit
    Pauli string; reconstruction sum(alpha * P) reproduces the input.
    """
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError("operator must be a square matrix")
    m = int(op.shape[0]).bit_length() - 1
    if op.shape[0] != 1 << m:
        raise ValueError(f"dimension {op.shape[0]} is not a power of two")
    if m > 4:
        raise ValueError(f"Pauli expansion is limited to 4 qubits, got {m}")
    out = {}
    for chars in product("IXYZ", repeat=m):
        label = "".join(chars)
        out[label] = complex(np.trace(pauli_label_matrix(label) @ op)) / (1 << m)
    return out


# -- the single-qubit filter ---------------------------------------------------

_P0 = np.diag([1.0, 0.0]).astype(np.complex128)
_P1 = np.diag([0.0, 1.0]).astype(np.complex128)
_EYE2 = np.eye(2, dtype=np.complex128)
_PLUS = np.array([1, 1], dtype=np.complex128) / np.sqrt(2)
_MINUS = np.array([1, -1], dtype=np.complex128) / np.sqrt(2)


def _controlled(gate: np.ndarray, control: int) -> np.ndarray:
    """8x8 `gate` on the data qubit controlled on ancilla 0 or 1."""
    if control == 0:
        return (np.kron(_P0, np.kron(_EYE2, _EYE2))
                + np.kron(_P1, np.kron(_EYE2, gate)))
    return (np.kron(_EYE2, np.kron(_P0, _EYE2))
            + np.kron(_EYE2, np.kron(_P1, gate)))


def run_filter(ch: KrausChannel, rho_in: np.ndarray):
    """One pass of the filter around `ch` on input state rho_in.

    Returns ({outcome bits: probability}, recovered data density matrix).
    """
    if ch.dim != 2:
        raise ValueError("the filter wraps a single-qubit channel")
    cz = _controlled(PAULI_1Q["Z"], 0)
    cx = _controlled(PAULI_1Q["X"], 1)
    plus = np.outer(_PLUS, _PLUS.conj())
    rho = np.kron(plus, np.kron(plus, rho_in.astype(np.complex128)))
    pre = cx @ cz
    rho = pre @ rho @ pre.conj().T
    rho = sum(np.kron(np.eye(4), e) @ rho @ np.kron(np.eye(4), e).conj().T
              for e in ch.elements)
    post = cz @ cx
    rho = post @ rho @ post.conj().T

    probs = {}
    rho_out = np.zeros((2, 2), dtype=np.complex128)
    for u0, u1 in product((0, 1), repeat=2):
        v0 = _MINUS if u0 else _PLUS
        v1 = _MINUS if u1 else _PLUS
        proj = np.kron(np.outer(v0, v0.conj()),
                       np.kron(np.outer(v1, v1.conj()), _EYE2))
        branch = proj @ rho @ proj.conj().T
        correction = PAULI_1Q["X" if u0 else "I"] @ PAULI_1Q["Z" if u1 else "I"]
        full_corr = np.kron(np.eye(4), correction)
        branch = full_corr @ branch @ full_corr.conj().T
        marginal = np.einsum("aras->rs", branch.reshape(4, 2, 4, 2))
        probs[(u0, u1)] = float(np.trace(marginal).real)
        rho_out += marginal
    return probs, rho_out


@dataclass(frozen=True)
class FilterReport:
    max_trace_distance: float
    states_checked: int
    passed: bool


def filter_identity_check(ch: KrausChannel, tol: float = 1e-10,
                          num_states: int = 20, seed=0) -> FilterReport:
    """Check that the filter turns `ch` into the identity channel.

    Runs the filter on `num_states` random input density matrices and
    reports the largest trace distance between input and recovered output.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    residual = completeness_residual(ch)
    if residual > COMPLETENESS_TOL:
        raise ValueError(
            f"channel violates completeness (residual {residual:.3e})")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    worst = 0.0
    for _ in range(num_states):
        rho = random_density_matrix(2, rng)
        _, rho_out = run_filter(ch, rho)
        worst = max(worst, trace_distance(rho, rho_out))
    return FilterReport(worst, num_states, worst <= tol)
