"""Quasi-hole partition functions: Upsilon determinants, their exact
derivatives, the closed-form normalization, and Schur-complement densities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .clinalg import SingularMatrixError, lu_factor
from .kernel import KernelSpec, kernel_matrix, kernel_matrix_partials


class SingularConfigurationError(Exception):
    """Operation requires pairwise distinct hole positions."""


@dataclass(frozen=True)
class HoleConfig:
    """Quasi-hole positions w in C^n with bath size N and field strength b."""

    w: tuple[complex, ...]
    N: int
    b: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(complex(v) for v in self.w))
        if self.N < 1:
            raise ValueError("bath size N must be at least 1")
        if self.b is None:
            object.__setattr__(self, "b", float(self.N))
        elif self.b <= 0:
            raise ValueError("field strength b must be positive")

    @property
    def n(self) -> int:
        return len(self.w)

    @property
    def spec(self) -> KernelSpec:
        return KernelSpec(b=self.b, M=self.N + self.n)

    def points(self) -> np.ndarray:
        return np.asarray(self.w, dtype=complex)

    def has_coincident_pair(self) -> bool:
        return any(self.w[i] == self.w[j]
                   for i in range(self.n) for j in range(i + 1, self.n))

    def require_distinct(self):
        if self.has_coincident_pair():
            raise SingularConfigurationError("hole positions must be pairwise distinct")


@dataclass(frozen=True)
class PartitionValue:
    """log of the squared-norm normalization together with its four pieces."""

    log_value: float
    log_gamma: float
    b_sum_sq: float
    minus_two_log_vandermonde: float
    log_upsilon: float


_LOGFACT_CUM = np.zeros(1)


def cumulative_log_factorials(m: int) -> float:
    """sum_{k=1}^{m} log k!, from a cached cumulative table."""
    global _LOGFACT_CUM
    if m >= _LOGFACT_CUM.size:
        size = max(m + 1, 1101)
        _LOGFACT_CUM = np.concatenate([[0.0], np.cumsum(gammaln(np.arange(2, size + 1)))])
    return float(_LOGFACT_CUM[m])


def scaled_kernel_matrix(cfg: HoleConfig) -> np.ndarray:
    """(pi/b) K_{N+n}(w_i, w_j), the matrix under the Upsilon determinant."""
    pts = cfg.points()
    return (math.pi / cfg.b) * kernel_matrix(cfg.spec, pts, pts)


def upsilon(cfg: HoleConfig) -> float:
    """det[(pi/b) K_{N+n}(w_i, w_j)], in [0, 1]; 0 for coincident points."""
    if cfg.n == 0:
        return 1.0
    if cfg.has_coincident_pair():
        return 0.0
    try:
        det = lu_factor(scaled_kernel_matrix(cfg)).det
    except SingularMatrixError:
        return 0.0
    return det.to_complex().real


def log_upsilon(cfg: HoleConfig) -> float:
    if cfg.n == 0:
        return 0.0
    cfg.require_distinct()
    return lu_factor(scaled_kernel_matrix(cfg)).det.log_mag


_SLOT_ORDERS = {
    ("row", "h"): (0, 1, 0, 0),
    ("row", "a"): (1, 0, 0, 0),
    ("col", "h"): (0, 0, 0, 1),
    ("col", "a"): (0, 0, 1, 0),
}


def _slot_list(alpha, beta, n):
    alpha = tuple(int(a) for a in alpha)
    beta = tuple(int(a) for a in beta)
    if len(alpha) != n or len(beta) != n:
        raise ValueError("derivative multi-indices must have one entry per hole")
    slots = []
    for i, a in enumerate(alpha):
        slots.extend([(i, "h")] * a)
    for i, a in enumerate(beta):
        slots.extend([(i, "a")] * a)
    if len(slots) > 2:
        raise ValueError("upsilon_derivative supports total order at most 2")
    return slots


def _deriv_matrix(cfg: HoleConfig, slots, partials) -> np.ndarray:
    """Entrywise derivative of the kernel matrix for the given slot list."""
    pts = cfg.points()
    n = cfg.n
    out = np.zeros((n, n), dtype=complex)
    for assignment in _side_assignments(len(slots)):
        order = [0, 0, 0, 0]
        mask = np.ones((n, n), dtype=bool)
        for (i, typ), side in zip(slots, assignment):
            o = _SLOT_ORDERS[(side, typ)]
            order = [x + y for x, y in zip(order, o)]
            if side == "row":
                mask &= (np.arange(n) == i)[:, None]
            else:
                mask &= (np.arange(n) == i)[None, :]
        if not mask.any():
            continue
        mat = kernel_matrix(cfg.spec, pts, pts, tuple(order), partials=partials)
        out += np.where(mask, mat, 0.0)
    return out


def _side_assignments(k: int):
    if k == 1:
        return [("row",), ("col",)]
    return [(a, b) for a in ("row", "col") for b in ("row", "col")]


def upsilon_derivative(cfg: HoleConfig, alpha, beta) -> complex:
    """Exact d^alpha dbar^beta of Upsilon via Jacobi's formula.

    alpha, beta are per-hole multi-indices of holomorphic and antiholomorphic
    orders, with |alpha| + |beta| <= 2.
    """
    cfg.require_distinct()
    slots = _slot_list(alpha, beta, cfg.n)
    ups = upsilon(cfg)
    if not slots:
        return complex(ups)
    pts = cfg.points()
    partials = kernel_matrix_partials(cfg.spec, pts, pts, kmax=2)
    m = kernel_matrix(cfg.spec, pts, pts, partials=partials)
    factor = lu_factor(m)
    if len(slots) == 1:
        return ups * complex(np.trace(factor.solve(_deriv_matrix(cfg, slots, partials))))
    d1 = factor.solve(_deriv_matrix(cfg, [slots[0]], partials))
    d2 = factor.solve(_deriv_matrix(cfg, [slots[1]], partials))
    d12 = factor.solve(_deriv_matrix(cfg, slots, partials))
    bracket = (np.trace(d1) * np.trace(d2) - np.trace(d2 @ d1) + np.trace(d12))
    return ups * complex(bracket)


def log_partition(cfg: HoleConfig) -> PartitionValue:
    """Exact log of the squared-norm normalization of the quasi-hole state.

    The closed form multiplies N! pi^N prod_{k<N+n} k! b^{n-(N+n)(N+n+1)/2}
    by exp(b sum |w_j|^2) Upsilon / |Vandermonde|^2; at n = 0 it reduces to
    pi^N prod k! b^{-N(N+1)/2}.
    """
    cfg.require_distinct()
    N, n, b = cfg.N, cfg.n, cfg.b
    log_gamma = (float(gammaln(N + 1)) + N * math.log(math.pi)
                 + cumulative_log_factorials(N + n - 1)
                 + (n - (N + n) * (N + n + 1) / 2.0) * math.log(b))
    b_sum = b * float(np.sum(np.abs(cfg.points()) ** 2))
    log_vdm = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            log_vdm += math.log(abs(cfg.w[j] - cfg.w[i]))
    log_ups = log_upsilon(cfg)
    total = log_gamma + b_sum - 2.0 * log_vdm + log_ups
    return PartitionValue(log_value=total, log_gamma=log_gamma, b_sum_sq=b_sum,
                          minus_two_log_vandermonde=-2.0 * log_vdm,
                          log_upsilon=log_ups)


def _paper_matrix_and_nu(cfg: HoleConfig, zs: np.ndarray):
    """M[i, j] = K(w_j, w_i) and nu(z)[i] = K(z, w_i) for a batch of z."""
    pts = cfg.points()
    m = kernel_matrix(cfg.spec, pts, pts).T
    nu = kernel_matrix(cfg.spec, np.asarray(zs, dtype=complex), pts)
    return m, nu


def theta(cfg: HoleConfig, z: complex) -> float:
    """Schur-complement density nu*(z) M^{-1} nu(z), in [0, K_{N+n}(z,z)]."""
    if cfg.n < 1:
        raise ValueError("theta needs at least one hole")
    cfg.require_distinct()
    m, nu = _paper_matrix_and_nu(cfg, np.array([z]))
    x = lu_factor(m).solve(nu[0])
    return float(np.real(np.conj(nu[0]) @ x))


def theta_polarized(cfg: HoleConfig, zeta: complex, z: complex) -> complex:
    """Polarized Schur density nu*(z) M^{-1} nu(zeta)."""
    if cfg.n < 1:
        raise ValueError("theta_polarized needs at least one hole")
    cfg.require_distinct()
    m, nu = _paper_matrix_and_nu(cfg, np.array([z, zeta]))
    x = lu_factor(m).solve(nu[1])
    return complex(np.conj(nu[0]) @ x)


def upsilon_prediction(cfg: HoleConfig, regime: str,
                       pair: tuple[int, int] | None = None) -> float:
    """Leading-order Upsilon: 1 away from merging, 1 - exp(-b s^2) for a
    single merging pair at separation s."""
    if regime == "no-merging":
        return 1.0
    if regime == "single-merging":
        if pair is None:
            raise ValueError("single-merging prediction needs the merging pair")
        i, j = pair
        s2 = abs(cfg.w[i] - cfg.w[j]) ** 2
        return -math.expm1(-cfg.b * s2)
    raise ValueError(f"no Upsilon prediction for regime {regime!r}")
