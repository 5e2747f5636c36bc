"""Pauli-string algebra on N*L qubits.

Strings are stored as x/z bitmasks (bit n = qubit n, little-endian: qubit
n is bit n of the computational basis index).  A qubit with both x and z
bits set carries Y.  Expectation values walk the amplitude array once per
term via the bitmask action; no dense matrix is ever built for that path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .model import HubbardModel, edge_multiplicity

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_MASKS = {v: k for k, v in _LETTERS.items()}

MERGE_TOL = 1e-12
DENSE_QUBIT_CAP = 16


@dataclass(frozen=True)
class PauliString:
    nq: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        mask = (1 << self.nq) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("bitmask exceeds qubit count")

    @classmethod
    def from_letters(cls, letters: str) -> "PauliString":
        x = z = 0
        for n, ch in enumerate(letters):
            bx, bz = _MASKS[ch]
            x |= bx << n
            z |= bz << n
        return cls(len(letters), x, z)

    def letters(self) -> str:
        return "".join(
            _LETTERS[((self.x >> n) & 1, (self.z >> n) & 1)] for n in range(self.nq)
        )

    @property
    def n_y(self) -> int:
        return (self.x & self.z).bit_count()

    def commutes(self, other: "PauliString") -> bool:
        a = (self.x & other.z).bit_count()
        b = (self.z & other.x).bit_count()
        return (a - b) % 2 == 0

    def __repr__(self):
        return f"PauliString({self.letters()!r})"


def multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Group product a*b with its accumulated phase in {1, -1, i, -i}.

    Convention Y = i X Z; per qubit the phase of the product is tracked
    through the symplectic form.
    """
    if a.nq != b.nq:
        raise ValueError(f"length mismatch: {a.nq} != {b.nq}")
    x = a.x ^ b.x
    z = a.z ^ b.z
    # phase exponent of i: writing P = i^{n_y} X^x Z^z, reordering Z^za X^xb
    # past each other contributes (-1)^{za & xb}.
    exp = (a.n_y + b.n_y - PauliString(a.nq, x, z).n_y) % 4
    sign = (a.z & b.x).bit_count() % 2
    phase = (1j ** exp) * (-1) ** sign
    return phase, PauliString(a.nq, x, z)


class PauliHamiltonian:
    """Weighted sum of Pauli strings, merged and kept duplicate-free."""

    def __init__(self, nq: int, terms=None):
        self.nq = nq
        self._terms: dict[tuple[int, int], complex] = {}
        if terms:
            for coeff, string in terms:
                self.add(coeff, string)

    def add(self, coeff: complex, string: PauliString):
        if string.nq != self.nq:
            raise ValueError("string length does not match Hamiltonian")
        key = (string.x, string.z)
        c = self._terms.get(key, 0j) + complex(coeff)
        if abs(c) <= MERGE_TOL:
            self._terms.pop(key, None)
        else:
            self._terms[key] = c

    @property
    def terms(self) -> list[tuple[complex, PauliString]]:
        out = [
            (c, PauliString(self.nq, x, z))
            for (x, z), c in self._terms.items()
        ]
        out.sort(key=lambda t: (t[1].x, t[1].z))
        return out

    def __len__(self):
        return len(self._terms)

    def __add__(self, other: "PauliHamiltonian") -> "PauliHamiltonian":
        if other.nq != self.nq:
            raise ValueError("qubit count mismatch")
        out = PauliHamiltonian(self.nq)
        out._terms = dict(self._terms)
        for (x, z), c in other._terms.items():
            out.add(c, PauliString(self.nq, x, z))
        return out

    def scaled(self, factor: complex) -> "PauliHamiltonian":
        out = PauliHamiltonian(self.nq)
        for (x, z), c in self._terms.items():
            out.add(c * factor, PauliString(self.nq, x, z))
        return out


def _term_phases(string: PauliString, indices: np.ndarray) -> np.ndarray:
    """Phase of P|k> for every index k: P|k> = phase(k) |k ^ x>."""
    signs = np.bitwise_count(indices & string.z) & 1
    phase = (1j ** (string.n_y % 4)) * np.where(signs, -1.0, 1.0)
    return phase


def expectation(state: np.ndarray, ham: PauliHamiltonian, imag_tol: float = 1e-9) -> float:
    """<psi| H |psi> term by term via the bitmask action."""
    dim = state.shape[0]
    if dim != 1 << ham.nq:
        raise ValueError(f"state dimension {dim} != 2^{ham.nq}")
    indices = np.arange(dim, dtype=np.uint64)
    acc = 0j
    for coeff, string in ham.terms:
        phase = _term_phases(string, indices)
        flipped = indices ^ np.uint64(string.x)
        acc += coeff * np.vdot(state[flipped], phase * state)
    if abs(acc.imag) > imag_tol:
        raise ValueError(f"non-Hermitian accumulation: imag part {acc.imag:.3e}")
    return float(acc.real)


def to_dense(ham: PauliHamiltonian, cap: int = DENSE_QUBIT_CAP) -> sp.csr_matrix:
    """Sparse matrix realization in the computational basis (qubit 0 = LSB)."""
    if ham.nq > cap:
        raise ValueError(f"qubit count {ham.nq} exceeds cap {cap}")
    dim = 1 << ham.nq
    indices = np.arange(dim, dtype=np.uint64)
    mat = sp.csr_matrix((dim, dim), dtype=complex)
    for coeff, string in ham.terms:
        phase = _term_phases(string, indices)
        rows = (indices ^ np.uint64(string.x)).astype(np.int64)
        mat = mat + sp.csr_matrix(
            (coeff * phase, (rows, indices.astype(np.int64))), shape=(dim, dim)
        )
    return mat


def term_count_report(model: HubbardModel) -> dict[str, int]:
    """Predicted species counts of the mapped Hamiltonian (unit-coupling edge multiplicities)."""
    N, L = model.N, model.L
    lam_t = sum(edge_multiplicity(L, r) for r in range(1, len(model.t) + 1))
    lam_v = sum(edge_multiplicity(L, r) for r in range(1, len(model.V) + 1))
    hop_each = N * L * lam_t // 2
    zz = N * L * (N * (1 + lam_v) - 1) // 2
    report = {
        "XX": hop_each,
        "YY": hop_each,
        "XY": hop_each,
        "YX": hop_each,
        "ZZ": zz,
        "Z": N * L,
        "constant": 1,
    }
    report["total"] = 4 * hop_each + zz + N * L + 1
    return report


def dumps(ham: PauliHamiltonian) -> str:
    """One term per line: coeff_re coeff_im letters, qubit 0 leftmost.

    The identity component, if any, goes into an ``# offset`` header line
    rather than a term line.
    """
    lines = []
    for c, s in ham.terms:
        if s.x == 0 and s.z == 0:
            lines.insert(0, f"# offset: {c.real:.17g} {c.imag:.17g}")
        else:
            lines.append(f"{c.real:.17g} {c.imag:.17g} {s.letters()}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> PauliHamiltonian:
    terms = []
    nq = None
    offset = None
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("# offset:"):
            re_s, im_s = line.removeprefix("# offset:").split()
            offset = complex(float(re_s), float(im_s))
            continue
        if not line or line.startswith("#"):
            continue
        re_s, im_s, letters = line.split()
        if nq is None:
            nq = len(letters)
        terms.append((complex(float(re_s), float(im_s)), PauliString.from_letters(letters)))
    if nq is None:
        raise ValueError("empty Hamiltonian text")
    if offset is not None:
        terms.append((offset, PauliString(nq, 0, 0)))
    return PauliHamiltonian(nq, terms)
