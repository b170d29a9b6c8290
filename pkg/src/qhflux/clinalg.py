"""Small dense complex linear algebra with log-domain determinants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lognum import LogComplex

PIVOT_FLOOR = 1e-300


class SingularMatrixError(Exception):
    """Raised when partial pivoting finds no pivot above the floor."""

    def __init__(self, pivot_index: int):
        self.pivot_index = pivot_index
        super().__init__(f"numerically singular matrix at pivot {pivot_index}")


@dataclass
class LUFactorization:
    perm: np.ndarray     # row permutation: P @ a == lower @ upper
    lower: np.ndarray
    upper: np.ndarray
    det: LogComplex

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        b = np.asarray(rhs, dtype=complex)
        single = b.ndim == 1
        if single:
            b = b[:, None]
        y = b[self.perm].copy()
        n = self.n
        for i in range(1, n):
            y[i] -= self.lower[i, :i] @ y[:i]
        x = y
        for i in range(n - 1, -1, -1):
            if i < n - 1:
                x[i] -= self.upper[i, i + 1:] @ x[i + 1:]
            x[i] /= self.upper[i, i]
        return x[:, 0] if single else x

    def inverse(self) -> np.ndarray:
        return self.solve(np.eye(self.n, dtype=complex))


def lu_factor(matrix: np.ndarray) -> LUFactorization:
    """LU with partial pivoting; determinant accumulated in log domain."""
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("lu_factor expects a square matrix")
    n = a.shape[0]
    perm = np.arange(n)
    log_det = 0.0
    arg_det = 0.0
    sign = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        pivot = a[p, k]
        if abs(pivot) < PIVOT_FLOOR:
            raise SingularMatrixError(k)
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        log_det += math.log(abs(pivot))
        arg_det += np.angle(pivot)
        a[k + 1:, k] /= pivot
        if k + 1 < n:
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    lower = np.tril(a, -1) + np.eye(n)
    upper = np.triu(a)
    det = LogComplex(log_det, arg_det + (math.pi if sign < 0 else 0.0))
    return LUFactorization(perm=perm, lower=lower, upper=upper, det=det)
