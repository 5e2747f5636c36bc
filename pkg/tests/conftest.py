import numpy as np
import pytest

from sunvqe.model import HubbardModel, SpinSector
from sunvqe import vqe


def su3_benchmark():
    """The L=3, three-color, one-particle-per-color ring used throughout."""
    return HubbardModel(L=3, N=3, U=5.0), SpinSector((1, 1, 1))


PHI_GRID_21 = [k / 21.0 for k in range(21)]


@pytest.fixture(scope="session")
def bfgs3_sweep():
    """Statevector BFGS sweep of the U=5 benchmark at 3 layers, shared by
    the energy-match, shot-noise and budget criteria (it is the expensive
    ground truth of the suite)."""
    model, sector = su3_benchmark()
    cfg = vqe.VqeConfig(
        layers=3, optimizer="bfgs", mode="exact",
        seed=7, multistart=3, max_evals=120_000,
    )
    return vqe.sweep_flux(model, sector, PHI_GRID_21, cfg, mirror=True)


@pytest.fixture(scope="session")
def bfgs1_sweep():
    """Same benchmark at a single layer (the under-expressive reference)."""
    model, sector = su3_benchmark()
    cfg = vqe.VqeConfig(
        layers=1, optimizer="bfgs", mode="exact",
        seed=7, multistart=3, max_evals=40_000,
    )
    return vqe.sweep_flux(model, sector, PHI_GRID_21, cfg, mirror=True)


def rel_energy_errors(sweep):
    return np.array(
        [abs(p.energy_vqe - p.energy_ed) / abs(p.energy_ed) for p in sweep.points]
    )
