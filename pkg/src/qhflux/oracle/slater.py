"""Reduced densities of orbital Slater determinants."""

from __future__ import annotations

import math
from itertools import permutations

import numpy as np

from ..kernel import weighted_orbitals
from .monomial import MonomialPolynomial, _perm_sign, marginal_squared


def one_body_kernel(ks: tuple[int, ...], b: float, xs: np.ndarray) -> np.ndarray:
    """gamma^(1)(x_i, x_j) = sum_k u_k(x_i) conj(u_k(x_j)) over the k-set."""
    m = max(ks) + 1
    u = weighted_orbitals(b, m, np.asarray(xs, dtype=complex))[:, list(ks)]
    return u @ u.conj().T


def slater_density(ks: tuple[int, ...], points, b: float) -> float:
    """m-point density (1/m!) det[gamma^(1)(x_i, x_j)] of the Slater state."""
    pts = np.asarray(points, dtype=complex)
    m = pts.size
    if m > len(ks):
        raise ValueError("cannot ask for more points than occupied orbitals")
    gram = one_body_kernel(ks, b, pts)
    return float(np.linalg.det(gram).real) / math.factorial(m)


def _slater_poly(ks: tuple[int, ...], b: float) -> MonomialPolynomial:
    """Polynomial part of the normalized Slater determinant."""
    n = len(ks)
    poly = MonomialPolynomial(n)
    coeffs = [math.sqrt(b ** (k + 1) / (math.pi * math.factorial(k))) for k in ks]
    for perm in permutations(range(n)):
        e = tuple(ks[perm[j]] for j in range(n))
        c = _perm_sign(perm) * math.prod(coeffs[perm[j]] for j in range(n))
        poly.add_term(e, c / math.sqrt(math.factorial(n)))
    return poly


def slater_density_brute(ks: tuple[int, ...], points, b: float) -> float:
    """Same m-point density by direct marginal integration of |Slater|^2."""
    n = len(ks)
    if n > 3:
        raise ValueError("brute-force route capped at 3 occupied orbitals")
    pts = np.asarray(points, dtype=complex)
    m = pts.size
    poly = _slater_poly(ks, b)
    return marginal_squared(poly, b, m, pts) * math.comb(n, m)
