"""Exact linear algebra over Q on object arrays of Fractions."""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def qmatrix(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Object array of Fractions; ``shape`` fixes the dimensions of an empty matrix."""
    if shape is not None and (shape[0] == 0 or shape[1] == 0):
        return np.empty(shape, dtype=object)
    a = np.array(rows, dtype=object)
    if a.ndim != 2:
        a = a.reshape(shape if shape is not None else (len(a), -1))
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = Fraction(v)
    return out


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for k in range(n):
        out[k, k] = Fraction(1)
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shapes {a.shape} and {b.shape} do not compose")
    out = zeros(a.shape[0], b.shape[1])
    for i in range(a.shape[0]):
        for k in range(a.shape[1]):
            if a[i, k]:
                out[i, :] += a[i, k] * b[k, :]
    return out


def is_zero(a: np.ndarray) -> bool:
    return not any(v != 0 for v in a.flat)


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns, by exact Gauss-Jordan elimination."""
    m = a.copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r, :] = m[r, :] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i, :] = m[i, :] - m[i, c] * m[r, :]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray) -> int:
    if 0 in a.shape:
        return 0
    return len(rref(a)[1])


def nullspace(a: np.ndarray) -> list[np.ndarray]:
    """Basis of {x : a x = 0}, one vector per free column."""
    cols = a.shape[1]
    if a.shape[0] == 0:
        return [identity(cols)[:, k] for k in range(cols)]
    m, pivots = rref(a)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = zeros(cols, 1)[:, 0]
        v[free] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -m[r, free]
        basis.append(v)
    return basis


def column_space(a: np.ndarray) -> list[np.ndarray]:
    if 0 in a.shape:
        return []
    _, pivots = rref(a)
    return [a[:, c].copy() for c in pivots]


def extend_independent(base: list[np.ndarray], candidates: list[np.ndarray], dim: int) -> list[np.ndarray]:
    """Candidates that are independent modulo the span of ``base``, chosen greedily in order."""
    chosen: list[np.ndarray] = []
    current = len(base)
    for v in candidates:
        stack = base + chosen + [v]
        if rank(np.column_stack(stack) if stack else zeros(dim, 0)) > current:
            chosen.append(v)
            current += 1
    return chosen


def to_strings(a: np.ndarray) -> list[list[str]]:
    return [[str(v) for v in row] for row in a]
