import numpy as np
import pytest

from mcsynth.sim import (
    KrausChannel,
    apply_channel,
    completeness_residual,
    filter_identity_check,
    pauli_coefficients,
    pauli_label_matrix,
    random_channel,
    random_density_matrix,
    run_filter,
    trace_distance,
)
from mcsynth.sim.channels import PAULI_1Q

from oracles import H_MAT, matrices_equal


def test_pauli_coefficients_examples():
    coeffs = pauli_coefficients(H_MAT)
    assert abs(coeffs["X"] - 2 ** -0.5) < 1e-12
    assert abs(coeffs["Z"] - 2 ** -0.5) < 1e-12
    assert abs(coeffs["I"]) < 1e-12 and abs(coeffs["Y"]) < 1e-12
    eye = pauli_coefficients(np.eye(4, dtype=complex))
    assert abs(eye["II"] - 1) < 1e-12
    assert all(abs(v) < 1e-12 for k, v in eye.items() if k != "II")


def test_pauli_coefficients_reconstruction_and_unitarity():
    rng = np.random.default_rng(0)
    for m in (1, 2):
        dim = 1 << m
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, _ = np.linalg.qr(g)
        coeffs = pauli_coefficients(q)
        recon = sum(a * pauli_label_matrix(k) for k, a in coeffs.items())
        assert matrices_equal(recon, q, 1e-12)
        assert abs(sum(abs(a) ** 2 for a in coeffs.values()) - 1) < 1e-12


def test_pauli_coefficients_guards():
    with pytest.raises(ValueError):
        pauli_coefficients(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        pauli_coefficients(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        pauli_coefficients(np.eye(32))


def test_random_channel_contract():
    for seed in range(1000):
        ch = random_channel(1 + seed % 4, seed)
        assert completeness_residual(ch) <= 1e-12
    ch1 = random_channel(1, 5)
    e = ch1.elements[0]
    assert matrices_equal(e @ e.conj().T, np.eye(2), 1e-12)   # single block is unitary
    with pytest.raises(ValueError):
        random_channel(5, 0)
    with pytest.raises(ValueError):
        random_channel(0, 0)


def test_channel_preserves_density_matrices():
    rng = np.random.default_rng(12)
    for seed in range(20):
        ch = random_channel(1 + seed % 4, rng)
        rho = random_density_matrix(2, rng)
        out = apply_channel(rho, ch)
        assert abs(np.trace(out).real - 1) < 1e-12
        assert np.max(np.abs(out - out.conj().T)) < 1e-12
        assert np.linalg.eigvalsh(out).min() > -1e-10


def test_filter_unitary_x_channel():
    chx = KrausChannel((PAULI_1Q["X"],))
    rho = random_density_matrix(2, 3)
    probs, rho_out = run_filter(chx, rho)
    assert abs(probs[(1, 0)] - 1) < 1e-12
    assert trace_distance(rho, rho_out) < 1e-12
    report = filter_identity_check(chx, tol=1e-12, num_states=5, seed=1)
    assert report.passed and report.max_trace_distance < 1e-12


def test_filter_identity_channel():
    ch = KrausChannel((np.eye(2, dtype=complex),))
    rho = random_density_matrix(2, 8)
    probs, rho_out = run_filter(ch, rho)
    assert abs(probs[(0, 0)] - 1) < 1e-12
    assert trace_distance(rho, rho_out) < 1e-12


@pytest.mark.parametrize("label, u", [("Z", (0, 1)), ("X", (1, 0)), ("Y", (1, 1))])
def test_filter_outcome_labels_paulis(label, u):
    probs, _ = run_filter(KrausChannel((PAULI_1Q[label],)),
                          random_density_matrix(2, 4))
    assert abs(probs[u] - 1) < 1e-12


def test_filter_random_channels():
    for seed in range(20):
        ch = random_channel(1 + seed % 4, seed)
        report = filter_identity_check(ch, tol=1e-10, num_states=10, seed=seed)
        assert report.passed, (seed, report)


def test_filter_rejects_incomplete_channel():
    bad = KrausChannel((0.5 * PAULI_1Q["X"],))
    with pytest.raises(ValueError, match="completeness"):
        filter_identity_check(bad)


def test_filter_strict_tolerance_fails_on_float_noise():
    ch = random_channel(3, 7)
    report = filter_identity_check(ch, tol=0.0, num_states=5, seed=2)
    assert not report.passed
    assert report.max_trace_distance > 0.0


def test_random_density_matrix_is_valid():
    rho = random_density_matrix(4, 9)
    assert abs(np.trace(rho).real - 1) < 1e-12
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(rho).min() > -1e-12
