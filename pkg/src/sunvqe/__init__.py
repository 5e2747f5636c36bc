"""VQE toolkit for flux-pierced SU(N) Hubbard rings.

Ground-state energies, persistent currents and entanglement entropies of
N-component fermions on a ring lattice, computed with a number-preserving
variational circuit and benchmarked against a fermionic
exact-diagonalization oracle.
"""

from .model import HubbardModel, SpinSector, flux_phase, lambda_couplings, validate

__all__ = [
    "HubbardModel",
    "SpinSector",
    "flux_phase",
    "lambda_couplings",
    "validate",
]

__version__ = "0.1.0"
