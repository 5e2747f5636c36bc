"""Ring-lattice Hubbard model definition and coupling bookkeeping.

The model is an L-site periodic chain of N-component fermions with
symmetric long-range hoppings t_r, on-site repulsion U, density-density
couplings V_r and a flux phi threading the ring (in units of the bare
flux quantum).  Nearest-neighbor-only models are the special case
t=[t1], V=[V1].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field


class ModelError(ValueError):
    """Raised when a model or sector violates a range constraint."""


@dataclass(frozen=True)
class HubbardModel:
    L: int
    N: int
    t: tuple[float, ...] = (1.0,)
    U: float = 0.0
    V: tuple[float, ...] = ()
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(float(x) for x in self.t))
        object.__setattr__(self, "V", tuple(float(x) for x in self.V))

    @property
    def n_qubits(self) -> int:
        return self.N * self.L

    def with_phi(self, phi: float) -> "HubbardModel":
        return HubbardModel(self.L, self.N, self.t, self.U, self.V, float(phi))

    @property
    def is_nearest_neighbor(self) -> bool:
        return len(self.t) <= 1 and len(self.V) <= 1


@dataclass(frozen=True)
class SpinSector:
    counts: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @property
    def n_particles(self) -> int:
        return sum(self.counts)


def validate(model: HubbardModel, sector: SpinSector | None = None):
    """Check all range invariants; returns the inputs unchanged."""
    if model.L < 2:
        raise ModelError(f"L must be >= 2, got L={model.L}")
    if model.N < 1:
        raise ModelError(f"N must be >= 1, got N={model.N}")
    half = model.L // 2
    if len(model.t) > half:
        raise ModelError(
            f"hopping range R_t={len(model.t)} exceeds floor(L/2)={half}"
        )
    if len(model.V) > half:
        raise ModelError(
            f"interaction range R_V={len(model.V)} exceeds floor(L/2)={half}"
        )
    if model.U < 0:
        raise ModelError(f"U must be non-negative, got U={model.U}")
    for r, v in enumerate(model.V, start=1):
        if v < 0:
            raise ModelError(f"V_{r} must be non-negative, got V_{r}={v}")
    if sector is not None:
        if len(sector.counts) != model.N:
            raise ModelError(
                f"sector has {len(sector.counts)} colors, model has N={model.N}"
            )
        for s, c in enumerate(sector.counts):
            if not 0 <= c <= model.L:
                raise ModelError(
                    f"counts[{s}]={c} outside [0, L={model.L}]"
                )
        return model, sector
    return model


def flux_phase(model: HubbardModel) -> complex:
    """Hopping phase factor exp(i 2 pi phi / L), exactly periodic in phi -> phi + L."""
    return cmath.exp(2j * math.pi * (model.phi % model.L) / model.L)


def edge_multiplicity(L: int, r: int) -> int:
    """Number of ring edges at distance r incident per site-sum term: 2 if r < L/2, 1 at the antipode."""
    if not 1 <= r <= L // 2:
        raise ModelError(f"distance r={r} outside [1, floor(L/2)={L // 2}]")
    return 1 if 2 * r == L else 2


def lambda_couplings(L: int, V: tuple[float, ...] | list[float]) -> float:
    """Weighted edge count sum_r g_L(r) V_r of the circulant ring graph."""
    if len(V) > L // 2:
        raise ModelError(
            f"coupling range R={len(V)} exceeds floor(L/2)={L // 2}"
        )
    return sum(edge_multiplicity(L, r) * v for r, v in enumerate(V, start=1))
