"""Simultaneous-measurement grouping and shot-based energy estimation.

For nearest-neighbor models the mapped Hamiltonian splits into four
simultaneously measurable sets: already-diagonal Z/ZZ/constant terms,
even-odd chain bonds, odd-even chain bonds, and the ring-closure bond.
Hop bonds are rotated pairwise into the hopping eigenbasis by the fixed
two-qubit unitary U_L(phi); ring-closure Z-strings (when kept) stay in
the computational basis.  When every color hosts an odd number of
fermions and L is even, the closure bond carries no string and its qubit
pair is free in the odd-even set, so it merges there and only three sets
remain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import HOP_BASIS, Gate
from .jw import hop_bonds
from .model import HubbardModel, SpinSector
from .pauli import PauliHamiltonian, PauliString

EVEN_ODD_HOP = "EVEN_ODD_HOP"
ODD_EVEN_HOP = "ODD_EVEN_HOP"
CLOSED_HOP = "CLOSED_HOP"
DIAGONAL = "DIAGONAL"

_LABEL_STREAM = {DIAGONAL: 0, EVEN_ODD_HOP: 1, ODD_EVEN_HOP: 2, CLOSED_HOP: 3}


@dataclass
class BondMeasurement:
    lo: int
    hi: int
    amp: float  # rotated-eigenvalue scale: -t * parity
    string_mask: int
    alpha: float  # U_L angle, sign follows the bond orientation

    @property
    def gate(self) -> Gate:
        return Gate(HOP_BASIS, (self.hi, self.lo), alpha=self.alpha)


@dataclass
class MeasurementGroup:
    label: str
    nq: int
    terms: list[tuple[complex, PauliString]] = field(default_factory=list)
    bonds: list[BondMeasurement] = field(default_factory=list)
    diagonal_terms: list[tuple[complex, PauliString]] = field(default_factory=list)
    _diag: np.ndarray | None = None

    def basis_gates(self) -> list[Gate]:
        return [b.gate for b in self.bonds]

    def eigenvalues(self) -> np.ndarray:
        """Post-rotation diagonal of the group operator over all basis words."""
        if self._diag is None:
            dim = 1 << self.nq
            idx = np.arange(dim, dtype=np.uint64)
            diag = np.zeros(dim)
            for b in self.bonds:
                b_lo = ((idx >> np.uint64(b.lo)) & 1).astype(np.int64)
                b_hi = ((idx >> np.uint64(b.hi)) & 1).astype(np.int64)
                pair = b_lo - b_hi  # +1 on |lo>, -1 on |hi>, 0 otherwise
                if b.string_mask:
                    signs = 1 - 2 * (np.bitwise_count(idx & np.uint64(b.string_mask)) & 1).astype(np.int64)
                    pair = pair * signs
                diag += b.amp * pair
            for coeff, string in self.diagonal_terms:
                signs = 1 - 2 * (np.bitwise_count(idx & np.uint64(string.z)) & 1).astype(np.int64)
                diag += coeff.real * signs
            self._diag = diag
        return self._diag


@dataclass
class ShotEstimate:
    mean: float
    stderr: float
    shots_per_group: int


def _bond_strings(nq: int, lo: int, hi: int, mask: int):
    pair = (1 << lo) | (1 << hi)
    return [
        (pair, mask),               # XX
        (pair, pair | mask),        # YY
        (pair, (1 << hi) | mask),   # XY
        (pair, (1 << lo) | mask),   # YX
    ]


def group_terms(
    ham: PauliHamiltonian,
    model: HubbardModel,
    sector: SpinSector,
    boundary: str = "parity",
) -> list[MeasurementGroup]:
    """Partition the Hamiltonian terms into simultaneously measurable groups."""
    if not model.is_nearest_neighbor:
        raise ValueError(
            "measurement grouping covers nearest-neighbor models only; "
            f"got R_t={len(model.t)}, R_V={len(model.V)}"
        )
    nq = ham.nq
    L = model.L
    term_map = {(s.x, s.z): c for c, s in ham.terms}
    groups = {
        label: MeasurementGroup(label, nq)
        for label in (DIAGONAL, EVEN_ODD_HOP, ODD_EVEN_HOP, CLOSED_HOP)
    }
    for (x, z), c in sorted(term_map.items()):
        if x == 0:
            string = PauliString(nq, 0, z)
            groups[DIAGONAL].terms.append((c, string))
            groups[DIAGONAL].diagonal_terms.append((c, string))

    merge_closed = (
        L % 2 == 0
        and boundary == "parity"
        and all(c % 2 == 1 for c in sector.counts)
    )
    # bonds sharing a qubit pair and string (L = 2 ring) carry one combined weight
    merged: dict[tuple[str, int, int, int], list] = {}
    for lo, hi, w, mask, orient in hop_bonds(model, sector, boundary):
        i = lo % L  # chain position of the lower site within its color
        wraps = (hi - lo) != 1
        if not wraps:
            label = EVEN_ODD_HOP if i % 2 == 0 else ODD_EVEN_HOP
        elif merge_closed:
            label = ODD_EVEN_HOP
        else:
            label = CLOSED_HOP
        entry = merged.setdefault((label, lo, hi, mask), [0j, orient])
        entry[0] += w

    claimed: set[tuple[int, int]] = set()
    for (label, lo, hi, mask), (w, orient) in merged.items():
        if abs(w) < 1e-15:
            continue
        group = groups[label]
        alpha = orient * math.pi * model.phi / L
        amp = w * complex(math.cos(2 * alpha), -math.sin(2 * alpha))
        if abs(amp.imag) > 1e-12 * max(1.0, abs(amp)):
            # combined weight is off the flux axis of U_L; rotate to its own phase
            alpha = math.atan2(w.imag, w.real) / 2.0
            amp = complex(abs(w), 0.0)
        group.bonds.append(BondMeasurement(lo, hi, amp.real, mask, alpha))
        for key in _bond_strings(nq, lo, hi, mask):
            if key in term_map and key not in claimed:
                claimed.add(key)
                group.terms.append((term_map[key], PauliString(nq, *key)))
    return [g for g in groups.values() if g.terms or g.bonds]


def basis_change(group: MeasurementGroup) -> list[Gate]:
    """Pairwise U_L rotations that diagonalize the group (no-op for DIAGONAL)."""
    if group.label == DIAGONAL:
        return []
    return group.basis_gates()


def rotated_probabilities(state: np.ndarray, group: MeasurementGroup) -> np.ndarray:
    from .circuit import apply_gate

    rotated = state.copy()
    for gate in basis_change(group):
        apply_gate(rotated, gate)
    return np.abs(rotated) ** 2


def exact_grouped_expectation(state: np.ndarray, groups) -> float:
    """Infinite-shot limit of the grouped estimator."""
    return sum(
        float(rotated_probabilities(state, g) @ g.eigenvalues()) for g in groups
    )


def estimate_energy(
    state: np.ndarray, groups, shots: int, seed
) -> ShotEstimate:
    """Sample each group with its own shot budget and RNG stream.

    Group streams are derived from the master seed by group label, so the
    result does not depend on evaluation order.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    mean = 0.0
    var_sum = 0.0
    for group in groups:
        probs = rotated_probabilities(state, group)
        probs = probs / probs.sum()
        eig = group.eigenvalues()
        rng = np.random.default_rng([_LABEL_STREAM[group.label], *np.atleast_1d(seed)])
        counts = rng.multinomial(shots, probs)
        g_mean = float(counts @ eig) / shots
        g_second = float(counts @ (eig**2)) / shots
        g_var = max(0.0, g_second - g_mean**2)
        mean += g_mean
        var_sum += g_var / shots
    return ShotEstimate(mean, math.sqrt(var_sum), shots)
