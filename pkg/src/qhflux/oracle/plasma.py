"""Metropolis sampling of the 2D Coulomb-gas density.

The target log-density is
    L(z) = -b sum|z_k|^2 + 2 mu sum_{i<j} log|z_i-z_j| + 2 p sum_{k,j} log|z_k-w_j|,
sampled with single-particle sweeps and isotropic Gaussian proposals.
Chains are bit-reproducible from the seed.
"""

from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PlasmaConfig:
    N: int
    b: float
    holes: tuple[complex, ...] = ()
    p: int = 1
    mu: int = 1
    sweeps: int = 2000
    burn_in: int = 1000
    thin: int = 10
    proposal_scale: float | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(complex(w) for w in self.holes))
        if self.p < 0 or self.mu < 1:
            raise ValueError("need p >= 0 and mu >= 1")
        if self.sweeps <= self.burn_in:
            raise ValueError("sweeps must exceed burn_in")
        if self.proposal_scale is None:
            object.__setattr__(self, "proposal_scale", 1.0 / math.sqrt(self.b))
        elif self.proposal_scale <= 0:
            raise ValueError("proposal_scale must be positive")


@dataclass(frozen=True)
class PlasmaSample:
    positions: np.ndarray
    log_density: float
    sweep_index: int


@dataclass
class ChainDiagnostics:
    acceptance_rate: float = 0.0
    proposals: int = 0
    accepted: int = 0
    tuning_warning: bool = False


def log_density(cfg: PlasmaConfig, z: np.ndarray) -> float:
    val = -cfg.b * float(np.sum(np.abs(z) ** 2))
    if cfg.N > 1:
        d = z[:, None] - z[None, :]
        iu = np.triu_indices(cfg.N, 1)
        with np.errstate(divide="ignore"):
            val += 2.0 * cfg.mu * float(np.sum(np.log(np.abs(d[iu]))))
    if cfg.holes and cfg.p:
        w = np.asarray(cfg.holes)
        with np.errstate(divide="ignore"):
            val += 2.0 * cfg.p * float(np.sum(np.log(np.abs(z[:, None] - w[None, :]))))
    return val


def move_log_ratio(cfg: PlasmaConfig, z: np.ndarray, k: int, znew: complex) -> float:
    """Log density ratio for moving particle k to znew."""
    zk = z[k]
    val = -cfg.b * (abs(znew) ** 2 - abs(zk) ** 2)
    others = np.abs(np.delete(z, k) - znew), np.abs(np.delete(z, k) - zk)
    if cfg.N > 1:
        with np.errstate(divide="ignore"):
            val += 2.0 * cfg.mu * float(np.sum(np.log(others[0])) - np.sum(np.log(others[1])))
    if cfg.holes and cfg.p:
        w = np.asarray(cfg.holes)
        with np.errstate(divide="ignore"):
            val += 2.0 * cfg.p * float(np.sum(np.log(np.abs(znew - w)))
                                       - np.sum(np.log(np.abs(zk - w))))
    return val


def initial_positions(cfg: PlasmaConfig, rng: np.random.Generator) -> np.ndarray:
    radius = math.sqrt(max(cfg.mu * cfg.N + cfg.p * len(cfg.holes), 1) / cfg.b)
    u = rng.uniform(0.0, 1.0, cfg.N)
    phi = rng.uniform(0.0, 2.0 * math.pi, cfg.N)
    return radius * np.sqrt(u) * np.exp(1j * phi)


def iter_plasma_mcmc(cfg: PlasmaConfig, diagnostics: ChainDiagnostics | None = None):
    """Generator of thinned post-burn-in samples."""
    rng = np.random.default_rng(np.random.PCG64(cfg.seed))
    z = initial_positions(cfg, rng)
    diag = diagnostics if diagnostics is not None else ChainDiagnostics()
    scale = cfg.proposal_scale
    for sweep in range(cfg.sweeps):
        steps = rng.normal(0.0, scale, size=(cfg.N, 2))
        logu = np.log(rng.uniform(size=cfg.N))
        for k in range(cfg.N):
            znew = z[k] + complex(steps[k, 0], steps[k, 1])
            if logu[k] < move_log_ratio(cfg, z, k, znew):
                z[k] = znew
                diag.accepted += 1
            diag.proposals += 1
        if sweep >= cfg.burn_in and (sweep - cfg.burn_in) % cfg.thin == 0:
            yield PlasmaSample(positions=z.copy(),
                               log_density=log_density(cfg, z),
                               sweep_index=sweep)
    diag.acceptance_rate = diag.accepted / max(diag.proposals, 1)
    if not 0.05 <= diag.acceptance_rate <= 0.95:
        diag.tuning_warning = True
        warnings.warn(f"acceptance rate {diag.acceptance_rate:.3f} outside [0.05, 0.95]; "
                      "consider adjusting proposal_scale", RuntimeWarning)


def plasma_mcmc(cfg: PlasmaConfig) -> tuple[list[PlasmaSample], ChainDiagnostics]:
    diag = ChainDiagnostics()
    samples = list(iter_plasma_mcmc(cfg, diag))
    return samples, diag


def dump_samples(path, n: int, samples: list[PlasmaSample]):
    """Binary dump: little-endian int64 N, then 2N float64 per sample."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<q", n))
        for s in samples:
            flat = np.empty(2 * n)
            flat[0::2] = s.positions.real
            flat[1::2] = s.positions.imag
            fh.write(flat.astype("<f8").tobytes())


def load_samples(path) -> list[np.ndarray]:
    with open(path, "rb") as fh:
        n = struct.unpack("<q", fh.read(8))[0]
        raw = np.frombuffer(fh.read(), dtype="<f8")
    out = []
    for row in raw.reshape(-1, 2 * n):
        out.append(row[0::2] + 1j * row[1::2])
    return out


def radial_density_l1(cfg: PlasmaConfig, samples: list[PlasmaSample],
                      bins: int = 40) -> float:
    """L1 distance between the empirical |z| distribution and the exact
    radial profile of the determinantal density (p = mu = 1, no holes)."""
    from ..kernel import weighted_orbitals

    if cfg.holes or cfg.mu != 1:
        raise ValueError("exact radial profile requires p*holes absent and mu = 1")
    radii = np.concatenate([np.abs(s.positions) for s in samples])
    r_max = 1.5 * math.sqrt(cfg.N / cfg.b)
    edges = np.linspace(0.0, r_max, bins + 1)
    counts, _ = np.histogram(radii, bins=edges)
    emp = counts / radii.size
    # exact bin masses: int_bin 2 pi r K_N(r, r) / N dr by fine midpoint rule
    sub = 32
    rr = np.linspace(0.0, r_max, bins * sub + 1)
    mid = 0.5 * (rr[1:] + rr[:-1])
    u = weighted_orbitals(cfg.b, cfg.N, mid.astype(complex))
    dens = 2.0 * math.pi * mid * np.sum(np.abs(u) ** 2, axis=1) / cfg.N
    mass = dens * np.diff(rr)
    exact = mass.reshape(bins, sub).sum(axis=1)
    tail_diff = abs((1.0 - float(emp.sum())) - (1.0 - float(exact.sum())))
    return float(np.sum(np.abs(emp - exact))) + tail_diff
