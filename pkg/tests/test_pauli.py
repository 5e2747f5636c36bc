import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sunvqe import pauli
from sunvqe.model import HubbardModel
from sunvqe.pauli import PauliHamiltonian, PauliString

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
MATS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def dense_string(s: PauliString) -> np.ndarray:
    """Kronecker build-up, qubit 0 = least significant tensor factor."""
    out = np.array([[1.0 + 0j]])
    for ch in s.letters():
        out = np.kron(MATS[ch], out)
    return out


def letters_strategy(nq):
    return st.text(alphabet="IXYZ", min_size=nq, max_size=nq)


def test_letters_roundtrip():
    s = PauliString.from_letters("XIZY")
    assert s.letters() == "XIZY"
    assert s.nq == 4
    assert s.n_y == 1


def test_single_qubit_z_matrix():
    m = pauli.to_dense(PauliHamiltonian(1, [(1.0, PauliString.from_letters("Z"))]))
    assert np.allclose(m.toarray(), np.diag([1.0, -1.0]))


def test_number_projector():
    # (1 - Z)/2 projects onto the occupied state
    ham = PauliHamiltonian(1)
    ham.add(0.5, PauliString(1))
    ham.add(-0.5, PauliString.from_letters("Z"))
    assert np.allclose(pauli.to_dense(ham).toarray(), np.diag([0.0, 1.0]))


@given(letters_strategy(3), letters_strategy(3))
@settings(max_examples=100)
def test_multiply_matches_dense(a_l, b_l):
    a, b = PauliString.from_letters(a_l), PauliString.from_letters(b_l)
    phase, c = pauli.multiply(a, b)
    assert np.allclose(phase * dense_string(c), dense_string(a) @ dense_string(b))


@given(letters_strategy(4), letters_strategy(4))
@settings(max_examples=100)
def test_commutes_matches_dense(a_l, b_l):
    a, b = PauliString.from_letters(a_l), PauliString.from_letters(b_l)
    ma, mb = dense_string(a), dense_string(b)
    assert a.commutes(b) == np.allclose(ma @ mb, mb @ ma)


def test_merge_cancels_duplicates():
    ham = PauliHamiltonian(2)
    ham.add(0.5, PauliString.from_letters("XZ"))
    ham.add(-0.5, PauliString.from_letters("XZ"))
    assert len(ham) == 0


@given(st.integers(0, 7), st.data())
@settings(max_examples=50)
def test_expectation_matches_dense(seed, data):
    nq = 3
    rng = np.random.default_rng(seed)
    terms = []
    for _ in range(data.draw(st.integers(1, 6))):
        letters = data.draw(letters_strategy(nq))
        coeff = rng.normal()
        terms.append((coeff, PauliString.from_letters(letters)))
    ham = PauliHamiltonian(nq, terms)
    # hermitize so the expectation is real
    herm = PauliHamiltonian(nq)
    for c, s in ham.terms:
        herm.add(c / 2, s)
        herm.add(np.conj(c) / 2, s)
    state = rng.normal(size=1 << nq) + 1j * rng.normal(size=1 << nq)
    state /= np.linalg.norm(state)
    dense = pauli.to_dense(herm).toarray()
    assert pauli.expectation(state, herm) == pytest.approx(
        np.vdot(state, dense @ state).real, abs=1e-12
    )


def test_dense_cap_enforced():
    with pytest.raises(ValueError):
        pauli.to_dense(PauliHamiltonian(20, [(1.0, PauliString(20))]), cap=16)


def test_serialization_roundtrip():
    ham = PauliHamiltonian(3)
    ham.add(0.5, PauliString.from_letters("XYI"))
    ham.add(-1.25 + 0.5j, PauliString.from_letters("ZZI"))
    ham.add(2.0, PauliString(3))  # identity -> offset header
    text = pauli.dumps(ham)
    assert text.startswith("# offset: 2 0")
    back = pauli.loads(text)
    assert back.terms == ham.terms


def test_term_count_report_extended_benchmark():
    report = pauli.term_count_report(HubbardModel(L=3, N=3, U=5.0, V=(1.0,)))
    assert report["XX"] == report["YY"] == report["XY"] == report["YX"] == 9
    assert report["ZZ"] == 36
    assert report["Z"] == 9
    # hop + ZZ + Z species follow the NL(4*lam_t + N(1+lam_V) + 1)/2 closed form
    assert 4 * report["XX"] + report["ZZ"] + report["Z"] == 81
