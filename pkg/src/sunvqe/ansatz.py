"""Number-preserving variational circuit and its complexity bookkeeping.

One layer = a hopping sublayer of iSWAP-type gates on within-color chain
bonds, an interaction sublayer of controlled-Rz gates coupling each color
to the next on every site, and a one-qubit Rz sublayer.  The ring closure
enters through the Hamiltonian, not the circuit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import CRZ, ISWAP_LIKE, RZ, X, Circuit, Gate
from .jw import mode_to_qubit
from .model import HubbardModel, SpinSector, validate


def default_occupation(model: HubbardModel, sector: SpinSector) -> int:
    """Compact fill: color s occupies sites 0..N_s-1 (all on site 0 when N_s = 1)."""
    word = 0
    for s, c in enumerate(sector.counts):
        for i in range(c):
            word |= 1 << mode_to_qubit(i, s, model.L)
    return word


def color_weights(word: int, L: int, N: int) -> tuple[int, ...]:
    block = (1 << L) - 1
    return tuple(((word >> (s * L)) & block).bit_count() for s in range(N))


def hamming_check(word: int, L: int, sector: SpinSector) -> bool:
    """True iff every color block's bit-count matches the sector."""
    return color_weights(word, L, len(sector.counts)) == sector.counts


@dataclass(frozen=True)
class AnsatzSpec:
    model: HubbardModel
    sector: SpinSector
    layers: int = 1
    occupation: int | None = None

    def occupation_word(self) -> int:
        if self.occupation is None:
            return default_occupation(self.model, self.sector)
        return self.occupation


def build_ansatz(spec: AnsatzSpec) -> Circuit:
    model, sector = validate(spec.model, spec.sector)
    if spec.layers < 0:
        raise ValueError("layer count must be >= 0")
    L, N = model.L, model.N
    word = spec.occupation_word()
    if not hamming_check(word, L, sector):
        raise ValueError(
            f"occupation word {word:#x} does not match sector counts {sector.counts}"
        )
    circuit = Circuit(model.n_qubits)
    slot = 0
    occupied = [q for q in range(model.n_qubits) if (word >> q) & 1]
    for q in occupied:
        circuit.gates.append(Gate(X, (q,)))
    # initial one-qubit sublayer only where a fermion was created
    for q in occupied:
        circuit.gates.append(Gate(RZ, (q,), slot))
        slot += 1
    for _ in range(spec.layers):
        for s in range(N):
            for i in range(L - 1):
                pair = (mode_to_qubit(i, s, L), mode_to_qubit(i + 1, s, L))
                circuit.gates.append(Gate(ISWAP_LIKE, pair, slot))
                slot += 1
        for i in range(L):
            for s in range(N - 1):
                pair = (mode_to_qubit(i, s, L), mode_to_qubit(i, s + 1, L))
                circuit.gates.append(Gate(CRZ, pair, slot))
                slot += 1
        for q in range(model.n_qubits):
            circuit.gates.append(Gate(RZ, (q,), slot))
            slot += 1
    return circuit


def complexity_report(
    N: int, L: int, layers: int, n_particles: int | None = None
) -> dict[str, int]:
    """Closed-form CNOT/depth/parameter accounting of the ansatz."""
    if N < 1 or L < 1:
        raise ValueError("N and L must be >= 1")
    if n_particles is None:
        n_particles = N
    cnot_layer = 5 * N * L - 3 * N - 2 * L
    depth_layer = 2 * N + 3 * L - 5
    params_layer = 3 * N * L - N - L
    return {
        "cnot_per_layer": cnot_layer,
        "depth_per_layer": depth_layer,
        "params_per_layer": params_layer,
        "cnot_count": layers * cnot_layer,
        "depth": layers * depth_layer,
        "parameter_count": n_particles + layers * params_layer,
    }
