"""Statevector simulator for the number-preserving gate set.

Amplitudes are indexed little-endian: qubit n is bit n of the basis
index.  Two-qubit gate matrices are written in the ordered pair basis
|b_p b_q> for targets (p, q), p being the most significant of the two
bits.  Gates act by amplitude-group updates on cached index arrays; no
dense unitary is ever assembled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NORM_ATOL = 1e-10

# gate kinds
X = "X"
RZ = "RZ"
ISWAP_LIKE = "ISWAP_LIKE"
CRZ = "CRZ"
HOP_BASIS = "HOP_BASIS"

_TRAINABLE = {RZ, ISWAP_LIKE, CRZ}


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    slot: int | None = None
    alpha: float | None = None  # fixed basis-change angle, HOP_BASIS only

    def __post_init__(self):
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("gate targets must be distinct")
        n_t = 1 if self.kind in (X, RZ) else 2
        if len(self.targets) != n_t:
            raise ValueError(f"{self.kind} takes {n_t} target(s)")
        if self.kind in _TRAINABLE and self.slot is None:
            raise ValueError(f"{self.kind} requires a parameter slot")
        if self.kind == HOP_BASIS and self.alpha is None:
            raise ValueError("HOP_BASIS requires a fixed angle")


@dataclass
class Circuit:
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)

    @property
    def n_parameters(self) -> int:
        slots = [g.slot for g in self.gates if g.slot is not None]
        return max(slots) + 1 if slots else 0


_INDEX_CACHE: dict[tuple, tuple] = {}


def _bit_groups(nq: int, q: int):
    """Index arrays (bit q = 0, bit q = 1)."""
    key = (nq, q)
    hit = _INDEX_CACHE.get(key)
    if hit is None:
        idx = np.arange(1 << nq)
        one = (idx >> q) & 1 == 1
        hit = (idx[~one], idx[one])
        _INDEX_CACHE[key] = hit
    return hit


def _pair_groups(nq: int, p: int, q: int):
    """Index arrays (i00, i01, i10, i11) for |b_p b_q>."""
    key = (nq, p, q)
    hit = _INDEX_CACHE.get(key)
    if hit is None:
        idx = np.arange(1 << nq)
        bp = (idx >> p) & 1
        bq = (idx >> q) & 1
        hit = tuple(idx[(bp == a) & (bq == b)] for a in (0, 1) for b in (0, 1))
        _INDEX_CACHE[key] = hit
    return hit


def init_state(nq: int, word: int = 0) -> np.ndarray:
    state = np.zeros(1 << nq, dtype=complex)
    state[word] = 1.0
    return state


def hop_basis_matrix(alpha: float) -> np.ndarray:
    """U_L with fixed angle alpha = pi*phi/L, in the |b_p b_q> pair basis."""
    u = np.exp(1j * alpha)
    s = 1.0 / math.sqrt(2.0)
    return np.array(
        [
            [1, 0, 0, 0],
            [0, u.conjugate() * s, u * s, 0],
            [0, -u.conjugate() * s, u * s, 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )


def apply_gate(state: np.ndarray, gate: Gate, theta: float | None = None, nq: int | None = None) -> np.ndarray:
    """Apply the gate in place and return the state."""
    if nq is None:
        nq = int(state.shape[0]).bit_length() - 1
    if gate.kind == X:
        q = gate.targets[0]
        i0, i1 = _bit_groups(nq, q)
        tmp = state[i0].copy()
        state[i0] = state[i1]
        state[i1] = tmp
    elif gate.kind == RZ:
        i0, i1 = _bit_groups(nq, gate.targets[0])
        state[i0] *= np.exp(-1j * theta)
        state[i1] *= np.exp(1j * theta)
    elif gate.kind == CRZ:
        _, _, i10, i11 = _pair_groups(nq, *gate.targets)
        state[i10] *= np.exp(-1j * theta)
        state[i11] *= np.exp(1j * theta)
    elif gate.kind == ISWAP_LIKE:
        _, i01, i10, _ = _pair_groups(nq, *gate.targets)
        c, s = math.cos(theta), math.sin(theta)
        a01 = state[i01]
        a10 = state[i10]
        state[i01] = c * a01 - 1j * s * a10
        state[i10] = -1j * s * a01 + c * a10
    elif gate.kind == HOP_BASIS:
        _, i01, i10, _ = _pair_groups(nq, *gate.targets)
        m = hop_basis_matrix(gate.alpha)
        a01 = state[i01]
        a10 = state[i10]
        state[i01] = m[1, 1] * a01 + m[1, 2] * a10
        state[i10] = m[2, 1] * a01 + m[2, 2] * a10
    else:
        raise ValueError(f"unknown gate kind {gate.kind!r}")
    return state


def run(circuit: Circuit, params: np.ndarray, word: int = 0) -> np.ndarray:
    if len(params) != circuit.n_parameters:
        raise ValueError(
            f"expected {circuit.n_parameters} parameters, got {len(params)}"
        )
    state = init_state(circuit.n_qubits, word)
    for gate in circuit.gates:
        theta = params[gate.slot] if gate.slot is not None else None
        apply_gate(state, gate, theta, circuit.n_qubits)
    return state


def reduced_entropy(
    state: np.ndarray, qubit_subset, base: str = "nats"
) -> float:
    """Von Neumann entropy of the reduced state over the subset.

    Uses singular values of the reshaped amplitude tensor, so the cost is
    set by the smaller side of the cut.
    """
    nq = int(state.shape[0]).bit_length() - 1
    subset = sorted(qubit_subset)
    if not 0 < len(subset) < nq:
        raise ValueError("subset must be nonempty and proper")
    comp = [q for q in range(nq) if q not in subset]
    if len(subset) > len(comp):
        subset, comp = comp, subset
    tensor = state.reshape([2] * nq)
    axes = [nq - 1 - q for q in subset] + [nq - 1 - q for q in comp]
    mat = tensor.transpose(axes).reshape(1 << len(subset), 1 << len(comp))
    sv = np.linalg.svd(mat, compute_uv=False)
    probs = sv**2
    probs = probs[probs > 1e-12]
    s = float(-np.sum(probs * np.log(probs)))
    if base == "bits":
        return s / math.log(2.0)
    if base != "nats":
        raise ValueError(f"unknown entropy base {base!r}")
    return s


def measurement_probabilities(state: np.ndarray, measured_qubits=None) -> np.ndarray:
    """Outcome distribution over the measured qubits (all by default)."""
    nq = int(state.shape[0]).bit_length() - 1
    probs = np.abs(state) ** 2
    if measured_qubits is None or sorted(measured_qubits) == list(range(nq)):
        return probs
    measured = sorted(measured_qubits)
    tensor = probs.reshape([2] * nq)
    keep_axes = {nq - 1 - q for q in measured}
    drop_axes = tuple(a for a in range(nq) if a not in keep_axes)
    # remaining axes stay in ascending order = descending qubit order, so a
    # C-order flatten makes measured[j] bit j of the outcome word
    return tensor.sum(axis=drop_axes).reshape(-1)


def sample_counts(
    state: np.ndarray, measured_qubits, shots: int, seed
) -> dict[int, int]:
    """Histogram of i.i.d. outcome draws; deterministic for a given seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = measurement_probabilities(state, measured_qubits)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return {int(w): int(c) for w, c in enumerate(counts) if c}
