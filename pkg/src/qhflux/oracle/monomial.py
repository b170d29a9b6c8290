"""Exact monomial-expansion integration for tiny quasi-hole systems.

The joint state is a polynomial in (z_1..z_N) times a Gaussian, so squared
norms and marginals reduce to the moment integral
int z^a zbar^c e^{-b|z|^2} dz = delta_{ac} pi a! / b^{a+1}, applied exactly
term by term.  Sizes are capped (the Vandermonde is expanded over all N!
permutations), which keeps this an independent brute-force oracle rather
than a general polynomial engine.
"""

from __future__ import annotations

import math
from itertools import permutations

from ..partition import HoleConfig

MAX_BATH = 4
MAX_HOLES = 2


class ExpansionSizeError(Exception):
    pass


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class MonomialPolynomial:
    """Sparse polynomial in several complex variables."""

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = dict(terms or {})

    def add_term(self, exponents: tuple[int, ...], coeff: complex):
        if coeff == 0:
            return
        cur = self.terms.get(exponents, 0j) + coeff
        if cur == 0:
            self.terms.pop(exponents, None)
        else:
            self.terms[exponents] = cur

    def __mul__(self, other: "MonomialPolynomial") -> "MonomialPolynomial":
        out = MonomialPolynomial(self.nvars)
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                out.add_term(tuple(x + y for x, y in zip(ea, eb)), ca * cb)
        return out

    def __add__(self, other: "MonomialPolynomial") -> "MonomialPolynomial":
        out = MonomialPolynomial(self.nvars, self.terms)
        for e, c in other.terms.items():
            out.add_term(e, c)
        return out

    def scaled(self, factor: complex) -> "MonomialPolynomial":
        return MonomialPolynomial(self.nvars,
                                  {e: c * factor for e, c in self.terms.items()})


def vandermonde_poly(nvars: int) -> MonomialPolynomial:
    """prod_{k<l}(z_k - z_l) expanded over permutations."""
    out = MonomialPolynomial(nvars)
    parity = -1 if (nvars * (nvars - 1) // 2) % 2 else 1
    for perm in permutations(range(nvars)):
        out.add_term(tuple(perm), parity * _perm_sign(perm))
    return out


def _hole_factor_coeffs(ws) -> list[complex]:
    """Ascending coefficients of prod_j (w_j - t) in t."""
    coeffs = [1.0 + 0j]
    for w in ws:
        nxt = [0j] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d] += complex(w) * c
            nxt[d + 1] -= c
        coeffs = nxt
    return coeffs


def _product_over_vars(coeffs: list[complex], nvars: int,
                       skip: int | None = None) -> MonomialPolynomial:
    out = MonomialPolynomial(nvars, {(0,) * nvars: 1.0 + 0j})
    for k in range(nvars):
        if k == skip:
            continue
        factor = MonomialPolynomial(nvars)
        for d, c in enumerate(coeffs):
            e = [0] * nvars
            e[k] = d
            factor.add_term(tuple(e), c)
        out = out * factor
    return out


def quasi_hole_poly(cfg: HoleConfig) -> MonomialPolynomial:
    """Polynomial part of the joint state: prod_{j,k}(w_j - z_k) Vandermonde."""
    if cfg.N > MAX_BATH or cfg.n > MAX_HOLES:
        raise ExpansionSizeError(f"expansion capped at N <= {MAX_BATH}, n <= {MAX_HOLES}")
    holes = _product_over_vars(_hole_factor_coeffs(cfg.w), cfg.N)
    return holes * vandermonde_poly(cfg.N)


def quasi_hole_poly_dw(cfg: HoleConfig, j: int) -> MonomialPolynomial:
    """Holomorphic w_j-derivative of the quasi-hole polynomial."""
    if cfg.N > MAX_BATH or cfg.n > MAX_HOLES:
        raise ExpansionSizeError(f"expansion capped at N <= {MAX_BATH}, n <= {MAX_HOLES}")
    others = [w for i, w in enumerate(cfg.w) if i != j]
    partner = _hole_factor_coeffs(others)
    full = _hole_factor_coeffs(cfg.w)
    total = MonomialPolynomial(cfg.N)
    for ell in range(cfg.N):
        rest = _product_over_vars(full, cfg.N, skip=ell)
        factor = MonomialPolynomial(cfg.N)
        for d, c in enumerate(partner):
            e = [0] * cfg.N
            e[ell] = d
            factor.add_term(tuple(e), c)
        total = total + rest * factor
    return total * vandermonde_poly(cfg.N)


def gaussian_pair_integral(pa: MonomialPolynomial, pb: MonomialPolynomial,
                           b: float) -> complex:
    """int conj(A) B prod_k e^{-b|z_k|^2} dz, exact via matched moments."""
    out = 0j
    for e, ca in pa.terms.items():
        cb = pb.terms.get(e)
        if cb is None:
            continue
        weight = 1.0
        for a in e:
            weight *= math.pi * math.factorial(a) / b ** (a + 1)
        out += ca.conjugate() * cb * weight
    return out


def partition_exact(cfg: HoleConfig) -> float:
    """log of the defining squared-norm integral, exact for tiny systems."""
    poly = quasi_hole_poly(cfg)
    val = gaussian_pair_integral(poly, poly, cfg.b).real
    return math.log(val)


def marginal_squared(poly: MonomialPolynomial, b: float, m: int, points) -> float:
    """int |F(x_1..x_m, X)|^2 prod gauss dX at fixed leading arguments.

    Returns the value including the Gaussian weights of the fixed points.
    """
    n = poly.nvars
    if m > n:
        raise ValueError("more fixed points than variables")
    pts = [complex(p) for p in points]
    total = 0j
    for e, ce in poly.terms.items():
        for f, cf in poly.terms.items():
            if e[m:] != f[m:]:
                continue
            weight = 1.0
            for a in e[m:]:
                weight *= math.pi * math.factorial(a) / b ** (a + 1)
            mono = 1.0 + 0j
            for i in range(m):
                mono *= pts[i].conjugate() ** e[i] * pts[i] ** f[i]
            total += ce.conjugate() * cf * weight * mono
    gauss = math.exp(-b * sum(abs(p) ** 2 for p in pts))
    return float(total.real) * gauss
