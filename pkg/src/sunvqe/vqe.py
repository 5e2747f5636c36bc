"""Optimization driver: cost evaluation, BFGS and NFT optimizers, flux sweeps.

Flux sweeps are adiabatically assisted: the first grid point starts from
random parameters (best of a few seeded restarts), every later point
warm-starts from the previous optimum.  Exact mode evaluates energies
from amplitudes; sampled mode estimates them from finite measurement
shots with deterministic per-evaluation RNG streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.optimize

from . import fermion_ed, measurement, pauli
from .ansatz import AnsatzSpec, build_ansatz
from .circuit import CRZ, ISWAP_LIKE, reduced_entropy, run
from .jw import build_current_operator, build_qubit_hamiltonian
from .model import HubbardModel, SpinSector, validate


@dataclass(frozen=True)
class VqeConfig:
    layers: int = 3
    optimizer: str = "bfgs"  # "bfgs" | "nft"
    mode: str = "exact"  # "exact" | "sampled"
    shots: int = 32768
    grad_tol: float = 1e-5
    max_evals: int = 200_000
    seed: int = 0
    multistart: int = 5
    fd_step: float = 1e-7
    nft_two_harmonic: bool = False
    occupation: int | None = None
    entropy_cut: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.grad_tol <= 0:
            raise ValueError("gradient tolerance must be positive")
        if self.mode == "sampled" and self.shots < 1:
            raise ValueError("sampled mode needs shots >= 1")
        if self.optimizer not in ("bfgs", "nft"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class OptResult:
    theta: np.ndarray
    energy: float
    evals: int
    converged: bool


class _BudgetExhausted(Exception):
    pass


class CostFunction:
    """Energy cost of the ansatz state, exact or shot-sampled.

    Sampled evaluations draw their seeds from (master seed, point tag,
    evaluation counter), so a run is reproducible bit for bit.
    """

    def __init__(self, circuit, ham_matrix, groups=None, shots=0, seed_prefix=()):
        self.circuit = circuit
        self.ham = ham_matrix
        self.groups = groups
        self.shots = shots
        self.seed_prefix = tuple(int(x) for x in seed_prefix)
        self.evals = 0
        self.best_theta = None
        self.best_energy = math.inf
        self.budget = None

    def state(self, theta: np.ndarray) -> np.ndarray:
        return run(self.circuit, theta)

    def exact_energy(self, theta: np.ndarray) -> float:
        psi = self.state(theta)
        return float(np.vdot(psi, self.ham @ psi).real)

    def __call__(self, theta: np.ndarray) -> float:
        if self.budget is not None and self.evals >= self.budget:
            raise _BudgetExhausted
        self.evals += 1
        if self.groups is None:
            e = self.exact_energy(theta)
        else:
            est = measurement.estimate_energy(
                self.state(theta),
                self.groups,
                self.shots,
                [*self.seed_prefix, self.evals],
            )
            e = est.mean
        if e < self.best_energy:
            self.best_energy = e
            self.best_theta = np.array(theta, dtype=float)
        return e


def _central_diff_grad(cost, theta, step):
    grad = np.empty_like(theta)
    for k in range(len(theta)):
        shifted = theta.copy()
        shifted[k] = theta[k] + step
        up = cost(shifted)
        shifted[k] = theta[k] - step
        down = cost(shifted)
        grad[k] = (up - down) / (2.0 * step)
    return grad


def optimize_quasi_newton(cost: CostFunction, theta0: np.ndarray, config: VqeConfig) -> OptResult:
    """BFGS with central-difference gradients, stopped on gradient norm or budget."""
    cost.budget = config.max_evals
    start_evals = cost.evals
    converged = False
    try:
        res = scipy.optimize.minimize(
            cost,
            np.asarray(theta0, dtype=float),
            method="BFGS",
            jac=lambda th: _central_diff_grad(cost, th, config.fd_step),
            options={"gtol": config.grad_tol, "maxiter": 10_000},
        )
        converged = bool(res.success)
    except _BudgetExhausted:
        converged = False
    theta = cost.best_theta if cost.best_theta is not None else np.asarray(theta0, float)
    return OptResult(theta, cost.best_energy, cost.evals - start_evals, converged)


def _nft_update(cost, theta, k, e0, freq=1):
    """Single-parameter jump to the minimizer of a fitted sinusoid.

    Fits E = a*cos(freq*theta - b) + c from e0 and two stencil points a
    quarter period away, then jumps to the fitted minimizer and returns
    its fitted energy.  Exact whenever the landscape is a pure harmonic
    at the given frequency.
    """
    base = theta[k]
    shifted = theta.copy()
    shifted[k] = base + math.pi / (2.0 * freq)
    ep = cost(shifted)
    shifted[k] = base - math.pi / (2.0 * freq)
    em = cost(shifted)
    c = 0.5 * (ep + em)
    b = math.atan2(2.0 * e0 - ep - em, ep - em)
    theta[k] = base - (math.pi / 2.0 + b) / freq
    amp = math.hypot(e0 - c, 0.5 * (ep - em))
    return c - amp


def _nft_update_two_harmonic(cost, theta, k, e0):
    """Five-point fit with a second harmonic, for two-gap generators."""
    base = theta[k]
    offsets = [2.0 * math.pi * j / 5.0 for j in range(1, 5)]
    values = [e0]
    for off in offsets:
        shifted = theta.copy()
        shifted[k] = base + off
        values.append(cost(shifted))
    angles = np.array([0.0, *offsets]) + base
    design = np.column_stack(
        [np.ones(5), np.cos(angles), np.sin(angles), np.cos(2 * angles), np.sin(2 * angles)]
    )
    coef = np.linalg.solve(design, np.array(values))

    def fit(u):
        return (
            coef[0]
            + coef[1] * np.cos(u)
            + coef[2] * np.sin(u)
            + coef[3] * np.cos(2 * u)
            + coef[4] * np.sin(2 * u)
        )

    grid = np.linspace(0.0, 2.0 * math.pi, 720, endpoint=False)
    step = grid[1]
    best = float(grid[int(np.argmin(fit(grid)))])
    res = scipy.optimize.minimize_scalar(
        fit, bounds=(best - step, best + step), method="bounded"
    )
    theta[k] = float(res.x)
    return float(res.fun)


def optimize_nft(
    cost: CostFunction,
    theta0: np.ndarray,
    config: VqeConfig,
    budget: int | None = None,
    single_harmonic_freqs: dict[int, int] | None = None,
) -> OptResult:
    """Cyclic single-parameter sinusoidal-fit descent until the budget runs out.

    Slots listed in single_harmonic_freqs have an exactly sinusoidal
    landscape at the stated frequency and use the 3-point fit as is.
    The remaining slots carry two harmonics; by default they get the
    3-point fundamental-frequency fit plus one confirmation evaluation
    (reverting moves that went uphill), or, with nft_two_harmonic on,
    the exact 5-point two-harmonic fit.
    """
    if budget is None:
        budget = config.max_evals
    if single_harmonic_freqs is None:
        single_harmonic_freqs = {}
    cost.budget = budget
    start_evals = cost.evals
    theta = np.asarray(theta0, dtype=float).copy()
    e0 = math.inf
    try:
        e0 = cost(theta)
        while True:
            for k in range(len(theta)):
                freq = single_harmonic_freqs.get(k)
                if freq is not None:
                    e0 = _nft_update(cost, theta, k, e0, freq=freq)
                elif config.nft_two_harmonic:
                    e0 = _nft_update_two_harmonic(cost, theta, k, e0)
                else:
                    base = theta[k]
                    _nft_update(cost, theta, k, e0, freq=1)
                    try:
                        e_new = cost(theta)
                    except _BudgetExhausted:
                        theta[k] = base
                        raise
                    if e_new <= e0:
                        e0 = e_new
                    else:
                        theta[k] = base
    except _BudgetExhausted:
        pass
    # the cyclic descent is monotone in its fitted energies, so the current
    # point is the result (stencil evaluations are probes, not candidates)
    return OptResult(theta, e0, cost.evals - start_evals, True)


@dataclass
class SweepPoint:
    phi: float
    theta: np.ndarray
    energy_vqe: float
    energy_ed: float
    current_vqe: float
    current_ed: float
    entropy_vqe: float
    entropy_ed: float
    evals: int
    converged: bool
    mirrored: bool = False
    ed_degenerate: bool = False


@dataclass
class SweepResult:
    model: HubbardModel
    sector: SpinSector
    config: VqeConfig
    points: list[SweepPoint] = field(default_factory=list)


def default_entropy_cut(n_qubits: int) -> tuple[int, ...]:
    return tuple(range(n_qubits // 2))


def observables_from_state(
    state: np.ndarray,
    model: HubbardModel,
    sector: SpinSector,
    cut: tuple[int, ...] | None = None,
) -> tuple[float, float, float]:
    """(energy, persistent current, half-chain entropy) of a qubit state."""
    ham = pauli.to_dense(build_qubit_hamiltonian(model, sector))
    cur = pauli.to_dense(build_current_operator(model, sector))
    if cut is None:
        cut = default_entropy_cut(model.n_qubits)
    energy = float(np.vdot(state, ham @ state).real)
    current = float(np.vdot(state, cur @ state).real)
    entropy = reduced_entropy(state, cut)
    return energy, current, entropy


def _single_harmonic_freqs(circuit) -> dict[int, int]:
    """RZ landscapes are pure second harmonics (relative phase 2*theta)."""
    return {
        g.slot: 2
        for g in circuit.gates
        if g.slot is not None and g.kind not in (ISWAP_LIKE, CRZ)
    }


class FluxPointSolver:
    """Shared machinery for optimizing one flux point of a sweep."""

    def __init__(self, model: HubbardModel, sector: SpinSector, config: VqeConfig):
        validate(model, sector)
        self.model = model
        self.sector = sector
        self.config = config
        spec = AnsatzSpec(model, sector, config.layers, config.occupation)
        self.circuit = build_ansatz(spec)
        self.cut = config.entropy_cut or default_entropy_cut(model.n_qubits)
        self.basis = fermion_ed.enumerate_sector_basis(model.L, sector)
        self.harmonic_freqs = _single_harmonic_freqs(self.circuit)

    def cost_at(self, phi: float, point_tag: int) -> CostFunction:
        model = self.model.with_phi(phi)
        ham = pauli.to_dense(build_qubit_hamiltonian(model, self.sector))
        groups = None
        if self.config.mode == "sampled":
            hq = build_qubit_hamiltonian(model, self.sector)
            groups = measurement.group_terms(hq, model, self.sector)
        return CostFunction(
            self.circuit,
            ham,
            groups=groups,
            shots=self.config.shots,
            seed_prefix=(self.config.seed, point_tag),
        )

    def optimize(self, cost: CostFunction, theta0: np.ndarray, budget: int | None = None) -> OptResult:
        if self.config.optimizer == "bfgs":
            if budget is not None:
                trimmed = replace(self.config, max_evals=budget)
                return optimize_quasi_newton(cost, theta0, trimmed)
            return optimize_quasi_newton(cost, theta0, self.config)
        return optimize_nft(
            cost, theta0, self.config, budget=budget,
            single_harmonic_freqs=self.harmonic_freqs,
        )

    def random_start(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, 2.0 * math.pi, self.circuit.n_parameters)

    def ed_observables(self, phi: float):
        model = self.model.with_phi(phi)
        ham = fermion_ed.build_fermionic_hamiltonian(model, self.basis)
        gs = fermion_ed.ground_state(ham)
        cur = fermion_ed.persistent_current_ed(model, self.sector)
        ent = fermion_ed.entanglement_entropy_ed(gs.vector, self.basis, self.cut)
        return gs, cur, ent


def sweep_flux(
    model: HubbardModel,
    sector: SpinSector,
    phi_grid,
    config: VqeConfig,
    mirror: bool = False,
) -> SweepResult:
    """Optimize along an increasing flux grid with warm starts.

    With mirror=True, points with phi > 0.5 whose partner 1-phi appears
    earlier in the grid are copied (energy kept, current negated) instead
    of re-optimized.
    """
    grid = [float(p) for p in phi_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("phi grid must be strictly increasing")
    solver = FluxPointSolver(model, sector, config)
    rng = np.random.default_rng(config.seed)
    result = SweepResult(model, sector, config)
    by_phi: dict[float, SweepPoint] = {}
    theta_prev = None
    for tag, phi in enumerate(grid):
        gs, cur, ent_ed = solver.ed_observables(phi)
        partner = round(1.0 - phi, 12)
        if mirror and phi > 0.5 and partner in by_phi:
            src = by_phi[partner]
            point = SweepPoint(
                phi,
                src.theta.copy(),
                src.energy_vqe,
                gs.energy,
                -src.current_vqe,
                cur.value,
                src.entropy_vqe,
                ent_ed,
                0,
                src.converged,
                mirrored=True,
                ed_degenerate=gs.degenerate,
            )
            result.points.append(point)
            by_phi[round(phi, 12)] = point
            continue
        budget = config.max_evals
        if abs(phi - 0.5) < 1e-12:
            budget *= 2  # crossing region is the hardest point of the sweep
        cost = solver.cost_at(phi, tag)
        if theta_prev is None:
            # cold start: split the point budget across random restarts
            starts = max(1, config.multistart)
            per_start = max(1, budget // starts)
            best = None
            for i in range(starts):
                res = solver.optimize(
                    cost, solver.random_start(rng), budget=(i + 1) * per_start
                )
                if best is None or res.energy < best.energy:
                    best = res
            res = best
        else:
            res = solver.optimize(cost, theta_prev, budget=budget)
        theta_prev = res.theta
        psi = run(solver.circuit, res.theta)
        m_phi = model.with_phi(phi)
        energy, current, entropy = observables_from_state(
            psi, m_phi, sector, solver.cut
        )
        point = SweepPoint(
            phi,
            res.theta,
            energy,
            gs.energy,
            current,
            cur.value,
            entropy,
            ent_ed,
            res.evals,
            res.converged,
            ed_degenerate=gs.degenerate,
        )
        result.points.append(point)
        by_phi[round(phi, 12)] = point
    return result


def save_parameters(path, theta: np.ndarray):
    with open(path, "w") as fh:
        for k, v in enumerate(theta):
            fh.write(f"{k} {v:.17g}\n")


def load_parameters(path) -> np.ndarray:
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            k, v = line.split()
            pairs.append((int(k), float(v)))
    pairs.sort()
    return np.array([v for _, v in pairs])
