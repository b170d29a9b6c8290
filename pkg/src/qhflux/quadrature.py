"""2D quadrature grids (tensor Gauss-Legendre and singularity-centered polar)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre


class IntegrationError(Exception):
    def __init__(self, node: complex, value):
        self.node = node
        self.value = value
        super().__init__(f"non-finite integrand value {value} at node {node}")


@dataclass
class QuadratureGrid:
    nodes: np.ndarray            # complex points
    weights: np.ndarray          # positive area weights
    scheme: str
    center: complex = 0j
    radii: np.ndarray | None = field(default=None, repr=False)
    radial_weights: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    @property
    def size(self) -> int:
        return self.nodes.size


def _panel_gl(edges: np.ndarray, nodes_per_panel: int):
    x, w = roots_legendre(nodes_per_panel)
    lo = edges[:-1][:, None]
    hi = edges[1:][:, None]
    r = (0.5 * (hi - lo) * x[None, :] + 0.5 * (hi + lo)).ravel()
    wr = (0.5 * (hi - lo) * w[None, :]).ravel()
    return r, wr


def cartesian_grid(radius: float, order: int = 64) -> QuadratureGrid:
    """Tensor Gauss-Legendre on the square [-radius, radius]^2."""
    x, w = roots_legendre(order)
    x = radius * x
    w = radius * w
    nodes = (x[:, None] + 1j * x[None, :]).ravel()
    weights = (w[:, None] * w[None, :]).ravel()
    return QuadratureGrid(nodes=nodes, weights=weights, scheme="cartesian-tensor")


def polar_grid(center: complex, r_max: float, *, r_min: float = 1e-8,
               n_theta: int = 64, nodes_per_panel: int = 10,
               panel_width: float | None = None) -> QuadratureGrid:
    """Polar grid centered at a (possibly singular) point.

    Rings are grouped into radial Gauss-Legendre panels whose edges grow
    geometrically from r_min; once panels reach panel_width the spacing
    switches to uniform so the outer region stays resolved.
    """
    if r_max <= r_min:
        raise ValueError("r_max must exceed r_min")
    if panel_width is None:
        panel_width = r_max / 4.0
    edges = [r_min]
    while edges[-1] * 10.0 < min(panel_width, r_max):
        edges.append(edges[-1] * 10.0)
    while edges[-1] < r_max:
        edges.append(min(edges[-1] + panel_width, r_max))
    edges = np.asarray(edges)
    r, wr = _panel_gl(edges, nodes_per_panel)
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    wtheta = 2.0 * np.pi / n_theta
    nodes = (center + r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = (wr * r)[:, None].repeat(n_theta, axis=1).ravel() * wtheta
    return QuadratureGrid(nodes=nodes, weights=weights, scheme="polar-centered",
                          center=center, radii=r, radial_weights=wr)


def integrate2d(grid: QuadratureGrid, f) -> complex:
    """Weighted sum of f over the grid; rejects non-finite integrand values."""
    try:
        values = np.asarray(f(grid.nodes), dtype=complex)
        if values.shape != grid.nodes.shape:
            raise TypeError
    except (TypeError, ValueError):
        values = np.array([f(z) for z in grid.nodes], dtype=complex)
    bad = ~np.isfinite(values.real) | ~np.isfinite(values.imag)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise IntegrationError(grid.nodes[i], values[i])
    return complex(np.sum(grid.weights * values))


def integrate_radial(grid: QuadratureGrid, f) -> complex:
    """1D radial rule of a polar grid applied to a radial profile f(r)."""
    if grid.radii is None:
        raise ValueError("integrate_radial needs a polar-centered grid")
    values = np.array([f(r) for r in grid.radii], dtype=complex)
    return complex(2.0 * np.pi * np.sum(grid.radial_weights * grid.radii * values))


def finite_diff_gradient(f, point: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central second-order finite-difference gradient of f at point."""
    x = np.asarray(point, dtype=float)
    out = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        out.append((f(x + e) - f(x - e)) / (2.0 * h))
    return np.asarray(out)
