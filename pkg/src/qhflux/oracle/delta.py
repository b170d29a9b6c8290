"""Finite verification of the bath-tracer contact interaction.

The operator sends a joint state F(y; x) to F(w; w) K_inf(z, w): evaluate the
state on the diagonal and re-project onto the lowest level in the bath slot.
On tensor products u (x) psi this is u(w) psi(w) K_inf(z, w); the quadratic
form is int |u psi|^2 and the operator squares to (b/pi) times itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..kernel import KernelSpec, kernel_infty, weighted_orbitals
from ..quadrature import cartesian_grid


@dataclass(frozen=True)
class DeltaCheckResult:
    quadratic_form_residual: float
    projector_residual: float


def delta_apply(f, b: float):
    """Lift F(y;x) = F(w;z) to (delta F)(w;z) = F(w;w) K_inf(z, w)."""
    spec = KernelSpec(b=b, M=1)

    def out(w: complex, z: complex) -> complex:
        return f(w, w) * kernel_infty(spec, z, w).to_complex()

    return out


def _orbital(b: float, k: int):
    def u(z):
        pts = np.atleast_1d(np.asarray(z, dtype=complex))
        vals = weighted_orbitals(b, k + 1, pts)[:, k]
        return vals if np.ndim(z) else complex(vals[0])
    return u


def delta_check(k: int, u, b: float, grid_order: int = 60,
                rng_seed: int = 5) -> DeltaCheckResult:
    """Quadratic-form and projector residuals for a test function u.

    u is the tracer factor; the bath factor is the k-th orbital.  The
    quadratic form <u x phi_k| delta |u x phi_k> is integrated once through
    the operator (a nested 2D quadrature) and compared against
    int |u phi_k|^2; the projector residual is the sup of
    |delta^2 F - (b/pi) delta F| over seeded points.
    """
    phi = _orbital(b, k)
    radius = 1.0 + 8.0 / math.sqrt(b)
    grid = cartesian_grid(radius, order=grid_order)

    # inner bath integral I(w) = int conj(psi(z)) K_inf(z, w) dz, then the
    # tracer integral of conj(u) u psi(w) I(w)
    zs = grid.nodes
    ws = grid.nodes
    x = zs[:, None] * ws[None, :].conj()
    log_k = (-0.5 * b * (np.abs(zs) ** 2)[:, None]
             - 0.5 * b * (np.abs(ws) ** 2)[None, :] + b * x)
    with np.errstate(under="ignore"):
        kmat = (b / math.pi) * np.exp(log_k)
    inner = (grid.weights * phi(zs).conj()) @ kmat
    uw = u(ws)
    lhs = np.sum(grid.weights * np.abs(uw) ** 2 * phi(ws) * inner)
    rhs = np.sum(grid.weights * np.abs(uw * phi(ws)) ** 2)
    quad_residual = float(abs(lhs - rhs))

    f = lambda w, z: u(w) * phi(z)
    df = delta_apply(f, b)
    ddf = delta_apply(df, b)
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    for _ in range(25):
        w, z = (complex(*p) for p in rng.uniform(-1.0, 1.0, size=(2, 2)))
        worst = max(worst, abs(ddf(w, z) - (b / math.pi) * df(w, z)))
    return DeltaCheckResult(quadratic_form_residual=quad_residual,
                            projector_residual=worst)
