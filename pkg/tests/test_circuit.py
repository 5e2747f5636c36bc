import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sunvqe.circuit import (
    CRZ,
    ISWAP_LIKE,
    RZ,
    X,
    Circuit,
    Gate,
    apply_gate,
    hop_basis_matrix,
    init_state,
    measurement_probabilities,
    reduced_entropy,
    run,
    sample_counts,
)


def state_of(nq, gates, params=None, word=0):
    c = Circuit(nq, list(gates))
    if params is None:
        params = np.zeros(c.n_parameters)
    return run(c, params, word)


def two_qubit_matrix(gate, theta, nq=2):
    """Dense matrix of a gate acting on qubits (1, 0), MSB first."""
    cols = []
    for b in range(1 << nq):
        state = init_state(nq, b)
        apply_gate(state, gate, theta, nq)
        cols.append(state)
    return np.column_stack(cols)


def test_x_gate_flips():
    psi = state_of(2, [Gate(X, (1,))])
    assert psi[0b10] == 1.0


def test_rz_matrix():
    m = two_qubit_matrix(Gate(RZ, (0,), 0), 0.7, nq=1)
    assert np.allclose(m, np.diag([np.exp(-0.7j), np.exp(0.7j)]))


def test_iswap_like_matrix():
    th = 0.4
    m = two_qubit_matrix(Gate(ISWAP_LIKE, (1, 0), 0), th)
    expect = np.eye(4, dtype=complex)
    expect[1:3, 1:3] = [
        [math.cos(th), -1j * math.sin(th)],
        [-1j * math.sin(th), math.cos(th)],
    ]
    assert np.allclose(m, expect)


def test_iswap_like_special_angles():
    assert np.allclose(two_qubit_matrix(Gate(ISWAP_LIKE, (1, 0), 0), 0.0), np.eye(4))
    m = two_qubit_matrix(Gate(ISWAP_LIKE, (1, 0), 0), math.pi / 2)
    # |01> (qubit 0 occupied) swaps onto -i |10>
    assert np.allclose(m[:, 0b01], [0, 0, -1j, 0])


def test_iswap_like_composes_additively():
    a = two_qubit_matrix(Gate(ISWAP_LIKE, (1, 0), 0), 0.3)
    b = two_qubit_matrix(Gate(ISWAP_LIKE, (1, 0), 0), 0.9)
    ab = two_qubit_matrix(Gate(ISWAP_LIKE, (1, 0), 0), 1.2)
    assert np.allclose(a @ b, ab)


def test_crz_matrix():
    th = 0.6
    m = two_qubit_matrix(Gate(CRZ, (1, 0), 0), th)
    assert np.allclose(m, np.diag([1, 1, np.exp(-1j * th), np.exp(1j * th)]))


def test_hop_basis_unitarity_and_diagonalization():
    L, phi = 3, 0.4
    alpha = math.pi * phi / L
    u = hop_basis_matrix(alpha)
    assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-12)
    # conjugating the flux-dressed pair hop must give diag(0, 1, -1, 0)
    w = np.exp(2j * math.pi * phi / L)
    pair = np.zeros((4, 4), dtype=complex)
    pair[0b01, 0b10] = w
    pair[0b10, 0b01] = np.conj(w)
    diag = u @ pair @ u.conj().T
    assert np.allclose(diag, np.diag([0.0, 1.0, -1.0, 0.0]), atol=1e-12)


@given(st.integers(0, 10))
@settings(max_examples=20, deadline=None)
def test_random_circuit_preserves_norm(seed):
    rng = np.random.default_rng(seed)
    nq = 4
    gates = [Gate(X, (0,)), Gate(X, (2,))]
    slot = 0
    for _ in range(6):
        kind = rng.choice([RZ, ISWAP_LIKE, CRZ])
        if kind == RZ:
            gates.append(Gate(RZ, (int(rng.integers(nq)),), slot))
        else:
            q = int(rng.integers(nq - 1))
            gates.append(Gate(kind, (q + 1, q), slot))
        slot += 1
    c = Circuit(nq, gates)
    psi = run(c, rng.uniform(0, 2 * math.pi, c.n_parameters))
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate(X, (0, 1))  # one-qubit gate, two targets
    with pytest.raises(ValueError):
        Gate(ISWAP_LIKE, (0,))
    with pytest.raises(ValueError):
        Gate(ISWAP_LIKE, (1, 1), 0)


def test_parameter_count_mismatch():
    c = Circuit(2, [Gate(RZ, (0,), 0)])
    with pytest.raises(ValueError):
        run(c, np.zeros(3))


def test_bell_state_entropy():
    # (|00> + |11>)/sqrt(2) across the 1-qubit cut: ln 2
    psi = np.zeros(4, dtype=complex)
    psi[0b00] = psi[0b11] = 1 / math.sqrt(2)
    assert reduced_entropy(psi, (0,)) == pytest.approx(math.log(2), abs=1e-12)
    assert reduced_entropy(psi, (1,), base="bits") == pytest.approx(1.0, abs=1e-12)


def test_product_state_entropy_zero():
    psi = init_state(3, 0b101)
    assert reduced_entropy(psi, (0, 2)) == pytest.approx(0.0, abs=1e-12)


def test_entropy_complement_symmetry():
    rng = np.random.default_rng(3)
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi /= np.linalg.norm(psi)
    s_a = reduced_entropy(psi, (0, 3))
    s_b = reduced_entropy(psi, (1, 2))
    assert s_a == pytest.approx(s_b, abs=1e-10)


def test_measurement_probabilities_marginal():
    psi = np.zeros(8, dtype=complex)
    psi[0b011] = math.sqrt(0.25)
    psi[0b110] = math.sqrt(0.75)
    probs = measurement_probabilities(psi, (1,))
    assert np.allclose(probs, [0.0, 1.0])
    probs02 = measurement_probabilities(psi, (0, 2))
    # outcome bit order follows the measured-qubit list
    assert probs02[0b01] == pytest.approx(0.25)  # qubit 0 set, qubit 2 clear
    assert probs02[0b10] == pytest.approx(0.75)


def test_sample_counts_deterministic_and_normalized():
    psi = np.zeros(4, dtype=complex)
    psi[0b01] = psi[0b10] = 1 / math.sqrt(2)
    a = sample_counts(psi, None, 1000, 5)
    b = sample_counts(psi, None, 1000, 5)
    assert a == b
    assert sum(a.values()) == 1000
    assert set(a) <= {0b01, 0b10}
