"""Monte Carlo moments of the characteristic polynomial.

E[prod_j |Q(w_j)|^2] over the no-hole determinantal ensemble equals the
ratio of quasi-hole normalizations; the estimator averages
exp(2 sum_{j,k} log|w_j - z_k|) in the log domain with batch-means errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..partition import HoleConfig, log_partition
from .plasma import PlasmaConfig, plasma_mcmc


class PrecisionError(Exception):
    pass


@dataclass(frozen=True)
class CharpolyEstimate:
    log_estimate: float
    log_std_error: float
    n_samples: int
    n_effective: float
    log_exact: float

    @property
    def z_score(self) -> float:
        return (self.log_estimate - self.log_exact) / self.log_std_error


def exact_log_ratio(cfg: HoleConfig) -> float:
    """log( c(empty)^2 / c(w)^2 ) from the closed-form normalization."""
    with_holes = log_partition(cfg).log_value
    no_holes = log_partition(HoleConfig(w=(), N=cfg.N, b=cfg.b)).log_value
    return with_holes - no_holes


def charpoly_moment_mc(cfg: HoleConfig, mcmc: PlasmaConfig,
                       batches: int = 50) -> CharpolyEstimate:
    """Estimate E[prod |Q(w_j)|^2] from no-hole chain samples."""
    if mcmc.holes or mcmc.mu != 1:
        raise ValueError("estimator needs samples from the no-hole mu = 1 density")
    if mcmc.N != cfg.N or mcmc.b != cfg.b:
        raise ValueError("chain parameters must match the hole configuration")
    samples, _ = plasma_mcmc(mcmc)
    if len(samples) < 400:
        raise PrecisionError(f"only {len(samples)} thinned samples; the "
                             "batch-means error needs at least 400")
    w = cfg.points()
    logs = np.empty(len(samples))
    for i, s in enumerate(samples):
        d = np.abs(w[:, None] - s.positions[None, :])
        logs[i] = 2.0 * float(np.sum(np.log(d)))
    shift = logs.max()
    y = np.exp(logs - shift)
    mean = float(y.mean())
    nb = min(batches, len(y) // 8)
    usable = (len(y) // nb) * nb
    bm = y[:usable].reshape(nb, -1).mean(axis=1)
    se = float(bm.std(ddof=1) / math.sqrt(nb))
    var_y = float(y.var(ddof=1))
    tau = max(1.0, (usable / nb) * float(bm.var(ddof=1)) / var_y) if var_y > 0 else 1.0
    n_eff = len(y) / tau
    if n_eff < 100:
        raise PrecisionError(f"only {n_eff:.0f} effective samples; need >= 100")
    return CharpolyEstimate(
        log_estimate=shift + math.log(mean),
        log_std_error=se / mean,
        n_samples=len(y),
        n_effective=n_eff,
        log_exact=exact_log_ratio(cfg),
    )
