import numpy as np
import pytest

from sunvqe import fermion_ed, jw, pauli
from sunvqe.model import HubbardModel, SpinSector

# (L, N, counts, U, V, phi): kept small enough for dense diagonalization
SYSTEMS = [
    (3, 3, (1, 1, 1), 0.0, (), 0.3),
    (3, 3, (1, 1, 1), 5.0, (), 0.0),
    (3, 3, (1, 1, 1), 5.0, (), 0.5),
    (3, 3, (2, 1, 1), 2.0, (1.0,), 0.25),
    (4, 2, (2, 1), 5.0, (), 0.2),
    (4, 2, (1, 1), 0.0, (0.7,), 0.8),
    (4, 3, (1, 1, 1), 2.0, (1.5,), 0.1),
    (2, 2, (1, 1), 3.0, (), 0.7),
    (5, 2, (2, 2), 1.0, (0.4,), 0.25),
    (6, 2, (1, 1), 0.0, (), 0.4),
    (2, 3, (1, 2, 1)[:3], 4.0, (), 0.15),
]


def sector_block(model, sector):
    """Rows/columns of the dense qubit Hamiltonian within the sector."""
    ham = jw.build_qubit_hamiltonian(model, sector)
    dense = pauli.to_dense(ham).toarray()
    basis = fermion_ed.enumerate_sector_basis(model.L, sector)
    idx = np.array(basis.words)
    return dense[np.ix_(idx, idx)], basis


@pytest.mark.parametrize("L,N,counts,U,V,phi", SYSTEMS)
def test_sector_spectrum_matches_fermionic_ed(L, N, counts, U, V, phi):
    model = HubbardModel(L=L, N=N, U=U, V=V, phi=phi)
    sector = SpinSector(counts)
    block, basis = sector_block(model, sector)
    ev_qubit = np.linalg.eigvalsh(block)
    ev_fermi = np.linalg.eigvalsh(
        fermion_ed.build_fermionic_hamiltonian(model, basis).toarray()
    )
    assert np.max(np.abs(ev_qubit - ev_fermi)) <= 1e-10


def test_matrix_elements_match_configuration_by_configuration():
    # mode ordering is shared, so the agreement must hold entrywise
    model = HubbardModel(L=3, N=3, U=5.0, phi=0.3)
    sector = SpinSector((1, 1, 1))
    block, basis = sector_block(model, sector)
    fermi = fermion_ed.build_fermionic_hamiltonian(model, basis).toarray()
    assert np.max(np.abs(block - fermi)) <= 1e-12


def test_sector_block_diagonality():
    # no matrix element may connect different per-color Hamming weights
    model = HubbardModel(L=3, N=2, U=2.0, phi=0.2)
    sector = SpinSector((1, 1))
    ham = jw.build_qubit_hamiltonian(model, sector)
    dense = pauli.to_dense(ham).toarray()
    def weights(w):
        return tuple(bin((w >> (s * 3)) & 0b111).count("1") for s in range(2))
    for a in range(dense.shape[0]):
        for b in range(dense.shape[1]):
            if weights(a) != weights(b):
                assert dense[a, b] == 0


def test_boundary_parity_convention():
    # the boundary hop picks up -1 exactly for even per-color filling
    assert jw.parity(2, 0, 3, SpinSector((1, 1))) == 1
    assert jw.parity(2, 0, 3, SpinSector((2, 1))) == -1
    assert jw.parity(1, 0, 3, SpinSector((2, 1))) == 1  # interior bond
    assert jw.parity(2, 1, 3, SpinSector((2, 1))) == 1


def test_hermiticity():
    model = HubbardModel(L=4, N=2, U=3.0, V=(0.5,), phi=0.3)
    sector = SpinSector((1, 1))
    for build in (jw.build_qubit_hamiltonian, jw.build_current_operator):
        dense = pauli.to_dense(build(model, sector)).toarray()
        assert np.allclose(dense, dense.conj().T, atol=1e-12)


def test_single_particle_ring_ground_energy():
    # one fermion on an L-site ring: E0 = -2t at zero flux
    model = HubbardModel(L=2, N=1)
    sector = SpinSector((1,))
    block, _ = sector_block(model, sector)
    assert np.min(np.linalg.eigvalsh(block)) == pytest.approx(-2.0, abs=1e-12)


def test_term_count_on_mapped_hamiltonian():
    model = HubbardModel(L=3, N=3, U=5.0, V=(1.0,), phi=0.25)
    ham = jw.build_qubit_hamiltonian(model, SpinSector((1, 1, 1)))
    non_identity = sum(1 for _, s in ham.terms if s.x or s.z)
    assert non_identity == 81


def test_current_operator_is_energy_flux_derivative():
    # I = -dE0/dphi, checked with central differences on the ED oracle path
    model = HubbardModel(L=3, N=3, U=5.0)
    sector = SpinSector((1, 1, 1))
    for phi in (0.1, 0.3, 0.45):
        block, basis = sector_block(model.with_phi(phi), sector)
        ev, vec = np.linalg.eigh(block)
        gs = vec[:, 0]
        cur = pauli.to_dense(
            jw.build_current_operator(model.with_phi(phi), sector)
        ).toarray()
        idx = np.array(basis.words)
        cur_block = cur[np.ix_(idx, idx)]
        i_op = np.vdot(gs, cur_block @ gs).real
        h = 1e-5
        e_up, _ = np.linalg.eigh(sector_block(model.with_phi(phi + h), sector)[0])
        e_dn, _ = np.linalg.eigh(sector_block(model.with_phi(phi - h), sector)[0])
        i_fd = -(e_up[0] - e_dn[0]) / (2 * h)
        assert i_op == pytest.approx(i_fd, abs=1e-6)
