"""Run configuration: YAML files with named blocks and embedded defaults.

Blocks: model (L, N, t, U, V, phi), sector (counts, occupation), vqe
(layers, optimizer, mode, shots, seed, budget, tolerance, multistart),
sweep (phi grid, mirror flag), output (paths, entropy cut, log base).
Every field has a default; a config file only lists what it overrides.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

import yaml

from .model import HubbardModel, ModelError, SpinSector, validate
from .vqe import VqeConfig


@dataclass(frozen=True)
class SweepSettings:
    phi_min: float = 0.0
    phi_max: float = 1.0
    points: int = 21
    mirror: bool = False

    def grid(self) -> list[float]:
        if self.points < 1:
            raise ModelError("sweep.points must be >= 1")
        if self.points == 1:
            return [self.phi_min]
        step = (self.phi_max - self.phi_min) / self.points
        return [self.phi_min + k * step for k in range(self.points)]


@dataclass(frozen=True)
class OutputSettings:
    prefix: str = "run"
    entropy_cut: tuple[int, ...] | None = None
    log_base: str = "nats"  # "nats" | "bits"

    def __post_init__(self):
        if self.log_base not in ("nats", "bits"):
            raise ModelError(f"output.log_base must be 'nats' or 'bits', got {self.log_base!r}")


@dataclass(frozen=True)
class RunConfig:
    model: HubbardModel = field(default_factory=lambda: HubbardModel(L=3, N=3))
    sector: SpinSector = field(default_factory=lambda: SpinSector((1, 1, 1)))
    vqe: VqeConfig = field(default_factory=VqeConfig)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, default=list)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _block(raw: dict, name: str) -> dict:
    block = raw.get(name, {})
    if block is None:
        block = {}
    if not isinstance(block, dict):
        raise ModelError(f"config block {name!r} must be a mapping")
    return dict(block)


def _pick(block: dict, name: str, allowed: set[str]):
    bad = set(block) - allowed
    if bad:
        raise ModelError(f"unknown key(s) in {name!r} block: {sorted(bad)}")


def load_config(path) -> RunConfig:
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ModelError("config file must contain a mapping of blocks")
    known = {"model", "sector", "vqe", "sweep", "output"}
    _pick(raw, "top level", known)
    return from_mapping(raw)


def from_mapping(raw: dict) -> RunConfig:
    mb = _block(raw, "model")
    _pick(mb, "model", {"L", "N", "t", "U", "V", "phi"})
    model = HubbardModel(
        L=int(mb.get("L", 3)),
        N=int(mb.get("N", 3)),
        t=tuple(float(x) for x in _as_list(mb.get("t", [1.0]))),
        U=float(mb.get("U", 0.0)),
        V=tuple(float(x) for x in _as_list(mb.get("V", []))),
        phi=float(mb.get("phi", 0.0)),
    )

    sb = _block(raw, "sector")
    _pick(sb, "sector", {"counts", "occupation"})
    counts = sb.get("counts")
    if counts is None:
        counts = [1] * model.N
    sector = SpinSector(tuple(int(c) for c in counts))
    occupation = sb.get("occupation")

    vb = _block(raw, "vqe")
    _pick(
        vb,
        "vqe",
        {"layers", "optimizer", "mode", "shots", "seed", "budget", "tolerance",
         "multistart", "fd_step", "nft_two_harmonic"},
    )
    ob = _block(raw, "output")
    _pick(ob, "output", {"prefix", "entropy_cut", "log_base"})
    cut = ob.get("entropy_cut")
    vqe = VqeConfig(
        layers=int(vb.get("layers", 3)),
        optimizer=str(vb.get("optimizer", "bfgs")),
        mode=str(vb.get("mode", "exact")),
        shots=int(vb.get("shots", 32768)),
        grad_tol=float(vb.get("tolerance", 1e-5)),
        max_evals=int(vb.get("budget", 200_000)),
        seed=int(vb.get("seed", 0)),
        multistart=int(vb.get("multistart", 5)),
        fd_step=float(vb.get("fd_step", 1e-7)),
        nft_two_harmonic=bool(vb.get("nft_two_harmonic", False)),
        occupation=None if occupation is None else int(str(occupation), 0),
        entropy_cut=None if cut is None else tuple(int(q) for q in cut),
    )

    wb = _block(raw, "sweep")
    _pick(wb, "sweep", {"phi_min", "phi_max", "points", "mirror"})
    sweep = SweepSettings(
        phi_min=float(wb.get("phi_min", 0.0)),
        phi_max=float(wb.get("phi_max", 1.0)),
        points=int(wb.get("points", 21)),
        mirror=bool(wb.get("mirror", False)),
    )

    output = OutputSettings(
        prefix=str(ob.get("prefix", "run")),
        entropy_cut=None if cut is None else tuple(int(q) for q in cut),
        log_base=str(ob.get("log_base", "nats")),
    )

    config = RunConfig(model=model, sector=sector, vqe=vqe, sweep=sweep, output=output)
    validate(model, sector)
    return config


def _as_list(value):
    if isinstance(value, (int, float)):
        return [value]
    return list(value)


def default_yaml() -> str:
    cfg = RunConfig()
    doc = {
        "model": {
            "L": cfg.model.L,
            "N": cfg.model.N,
            "t": list(cfg.model.t),
            "U": cfg.model.U,
            "V": list(cfg.model.V),
            "phi": cfg.model.phi,
        },
        "sector": {"counts": list(cfg.sector.counts), "occupation": None},
        "vqe": {
            "layers": cfg.vqe.layers,
            "optimizer": cfg.vqe.optimizer,
            "mode": cfg.vqe.mode,
            "shots": cfg.vqe.shots,
            "seed": cfg.vqe.seed,
            "budget": cfg.vqe.max_evals,
            "tolerance": cfg.vqe.grad_tol,
            "multistart": cfg.vqe.multistart,
            "fd_step": cfg.vqe.fd_step,
            "nft_two_harmonic": cfg.vqe.nft_two_harmonic,
        },
        "sweep": {
            "phi_min": cfg.sweep.phi_min,
            "phi_max": cfg.sweep.phi_max,
            "points": cfg.sweep.points,
            "mirror": cfg.sweep.mirror,
        },
        "output": {
            "prefix": cfg.output.prefix,
            "entropy_cut": None,
            "log_base": cfg.output.log_base,
        },
    }
    return yaml.safe_dump(doc, sort_keys=False)
