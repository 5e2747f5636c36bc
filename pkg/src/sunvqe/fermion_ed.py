"""Exact diagonalization oracle built directly in the fermionic Fock sector.

Occupation words use the same mode ordering n = i + s*L as the qubit
mapping (bit n of a word = occupation of mode n), so sector ED and the
Pauli path agree configuration by configuration.  Antisymmetry signs are
computed from first principles as parities of occupied modes below the
acted-on index.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .model import HubbardModel, SpinSector, flux_phase, validate

DENSE_CUTOFF = 512
DEGENERACY_ATOL = 1e-8
WORD_WIDTH_MAX = 62


@dataclass(frozen=True)
class SectorBasis:
    L: int
    counts: tuple[int, ...]
    words: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def n_modes(self) -> int:
        return self.L * len(self.counts)

    def index(self, word: int) -> int:
        k = self._index_map.get(word)
        if k is None:
            raise KeyError(f"word {word:#x} not in sector basis")
        return k

    @property
    def _index_map(self):
        m = self.__dict__.get("_cached_index")
        if m is None:
            m = {w: k for k, w in enumerate(self.words)}
            self.__dict__["_cached_index"] = m
        return m


def enumerate_sector_basis(L: int, sector: SpinSector) -> SectorBasis:
    """All occupation words with the prescribed per-color particle numbers, ordered."""
    if L * len(sector.counts) > WORD_WIDTH_MAX:
        raise OverflowError(
            f"{L * len(sector.counts)} modes exceed supported word width {WORD_WIDTH_MAX}"
        )
    per_color = []
    for s, c in enumerate(sector.counts):
        if not 0 <= c <= L:
            raise ValueError(f"counts[{s}]={c} outside [0, {L}]")
        color_words = []
        for sites in itertools.combinations(range(L), c):
            w = 0
            for i in sites:
                w |= 1 << (i + s * L)
            color_words.append(w)
        per_color.append(color_words)
    words = sorted(sum(combo) for combo in itertools.product(*per_color))
    return SectorBasis(L, sector.counts, tuple(words))


def _hop_element(word: int, create: int, annihilate: int):
    """Apply c^+_create c_annihilate; returns (new word, sign) or None."""
    if not (word >> annihilate) & 1:
        return None
    sign = -1 if ((word & ((1 << annihilate) - 1)).bit_count() & 1) else 1
    word &= ~(1 << annihilate)
    if (word >> create) & 1:
        return None
    if (word & ((1 << create) - 1)).bit_count() & 1:
        sign = -sign
    return word | (1 << create), sign


def _site_occupations(word: int, L: int, N: int) -> list[int]:
    return [
        sum((word >> (i + s * L)) & 1 for s in range(N)) for i in range(L)
    ]


def build_fermionic_hamiltonian(model: HubbardModel, basis: SectorBasis) -> sp.csr_matrix:
    validate(model, SpinSector(basis.counts))
    L, N = model.L, model.N
    phase = flux_phase(model)
    rows, cols, vals = [], [], []
    index = basis._index_map
    for col, word in enumerate(basis.words):
        # hoppings
        for r, t_r in enumerate(model.t, start=1):
            if t_r == 0.0:
                continue
            for s in range(N):
                for i in range(L):
                    m = i + s * L
                    n = (i + r) % L + s * L
                    res = _hop_element(word, m, n)
                    if res is not None:
                        rows.append(index[res[0]])
                        cols.append(col)
                        vals.append(-t_r * phase * res[1])
                    res = _hop_element(word, n, m)
                    if res is not None:
                        rows.append(index[res[0]])
                        cols.append(col)
                        vals.append(-t_r * phase.conjugate() * res[1])
        # diagonal interactions
        diag = 0.0
        occ = _site_occupations(word, L, N)
        if model.U != 0.0:
            diag += model.U * sum(o * (o - 1) // 2 for o in occ)
        for r, v_r in enumerate(model.V, start=1):
            if v_r == 0.0:
                continue
            diag += v_r * sum(occ[i] * occ[(i + r) % L] for i in range(L))
        if diag != 0.0:
            rows.append(col)
            cols.append(col)
            vals.append(complex(diag))
    return sp.csr_matrix(
        (vals, (rows, cols)), shape=(basis.size, basis.size), dtype=complex
    )


@dataclass
class GroundState:
    energy: float
    vector: np.ndarray
    degenerate: bool
    gap: float


def ground_state(h: sp.spmatrix) -> GroundState:
    """Minimal eigenpair; degeneracy flagged when the gap closes."""
    dim = h.shape[0]
    if dim < 1:
        raise ValueError("empty Hamiltonian")
    if dim == 1:
        val = complex(h.toarray()[0, 0]).real
        return GroundState(val, np.ones(1, dtype=complex), False, math.inf)
    if dim <= DENSE_CUTOFF:
        vals, vecs = np.linalg.eigh(h.toarray())
    else:
        k = min(6, dim - 1)
        vals, vecs = spla.eigsh(h.tocsc(), k=k, which="SA")
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    gap = float(vals[1] - vals[0]) if len(vals) > 1 else math.inf
    scale = max(1.0, abs(float(vals[0])))
    degenerate = gap < DEGENERACY_ATOL * scale
    vec = vecs[:, 0].astype(complex)
    vec /= np.linalg.norm(vec)
    return GroundState(float(vals[0]), vec, degenerate, gap)


def sector_spectrum(model: HubbardModel, sector: SpinSector) -> np.ndarray:
    basis = enumerate_sector_basis(model.L, sector)
    h = build_fermionic_hamiltonian(model, basis)
    return np.linalg.eigvalsh(h.toarray())


def build_current_matrix(model: HubbardModel, basis: SectorBasis) -> sp.csr_matrix:
    """Persistent-current operator (2 pi i t / L) sum (phase c^+c - h.c.) in the sector."""
    if len(model.t) > 1:
        raise ValueError("current operator is defined for nearest-neighbor hopping")
    L, N = model.L, model.N
    t = model.t[0] if model.t else 0.0
    phase = flux_phase(model)
    pref = 2j * math.pi * t / L
    rows, cols, vals = [], [], []
    index = basis._index_map
    for col, word in enumerate(basis.words):
        for s in range(N):
            for i in range(L):
                m = i + s * L
                n = (i + 1) % L + s * L
                res = _hop_element(word, m, n)
                if res is not None:
                    rows.append(index[res[0]])
                    cols.append(col)
                    vals.append(pref * phase * res[1])
                res = _hop_element(word, n, m)
                if res is not None:
                    rows.append(index[res[0]])
                    cols.append(col)
                    vals.append(-pref * phase.conjugate() * res[1])
    return sp.csr_matrix(
        (vals, (rows, cols)), shape=(basis.size, basis.size), dtype=complex
    )


@dataclass
class CurrentResult:
    value: float
    degenerate: bool


def solve_sector(model: HubbardModel, sector: SpinSector):
    basis = enumerate_sector_basis(model.L, sector)
    h = build_fermionic_hamiltonian(model, basis)
    return basis, ground_state(h)


def persistent_current_ed(
    model: HubbardModel, sector: SpinSector, limit_step: float = 1e-4
) -> CurrentResult:
    """Ground-state expectation of the current operator.

    At a level crossing the value is ill-defined; the symmetric average
    of the left/right flux limits is reported and flagged.
    """
    val, degenerate = _current_expectation(model, sector)
    if degenerate:
        left, _ = _current_expectation(model.with_phi(model.phi - limit_step), sector)
        right, _ = _current_expectation(model.with_phi(model.phi + limit_step), sector)
        return CurrentResult(0.5 * (left + right), True)
    return CurrentResult(val, False)


def _current_expectation(model: HubbardModel, sector: SpinSector):
    basis, gs = solve_sector(model, sector)
    op = build_current_matrix(model, basis)
    val = np.vdot(gs.vector, op @ gs.vector)
    return float(val.real), gs.degenerate


def embed_sector_state(basis: SectorBasis, vector: np.ndarray) -> np.ndarray:
    """Lift a sector amplitude vector into the full 2^(N*L) mode space."""
    full = np.zeros(1 << basis.n_modes, dtype=complex)
    full[np.fromiter(basis.words, dtype=np.int64)] = vector
    return full


def entanglement_entropy_ed(
    state: np.ndarray,
    basis: SectorBasis,
    qubit_subset: tuple[int, ...] | list[int],
    base: str = "nats",
) -> float:
    """Von Neumann entropy of the reduced state on the given mode subset.

    Computed from the eigenvalues of the reduced density matrix of the
    smaller side, after embedding the sector vector in the full mode
    space.
    """
    nq = basis.n_modes
    subset = sorted(qubit_subset)
    if not 0 < len(subset) < nq:
        raise ValueError("subset must be nonempty and proper")
    full = embed_sector_state(basis, state)
    comp = [q for q in range(nq) if q not in subset]
    if len(subset) > len(comp):
        subset, comp = comp, subset
    # axis j of the reshaped tensor is qubit nq-1-j
    tensor = full.reshape([2] * nq)
    axes = [nq - 1 - q for q in subset] + [nq - 1 - q for q in comp]
    mat = tensor.transpose(axes).reshape(1 << len(subset), 1 << len(comp))
    rho = mat @ mat.conj().T
    probs = np.linalg.eigvalsh(rho)
    probs = probs[probs > 1e-12]
    s = float(-np.sum(probs * np.log(probs)))
    if base == "bits":
        return s / math.log(2.0)
    if base != "nats":
        raise ValueError(f"unknown entropy base {base!r}")
    return s
