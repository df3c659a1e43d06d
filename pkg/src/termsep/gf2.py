"""Dense GF(2) linear algebra on numpy uint8 arrays."""

from __future__ import annotations

import itertools

import numpy as np


def as_gf2(a) -> np.ndarray:
    """Coerce to a uint8 array of 0/1 values."""
    arr = np.asarray(a, dtype=np.uint8) % 2
    return arr


def rref(mat: np.ndarray):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    r = as_gf2(mat).copy()
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + hits[0]
        if pivot != row:
            r[[row, pivot]] = r[[pivot, row]]
        others = np.nonzero(r[:, col])[0]
        for i in others:
            if i != row:
                r[i] ^= r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    _, pivots = rref(mat)
    return len(pivots)


def solve(mat: np.ndarray, rhs: np.ndarray):
    """One solution of mat @ x = rhs over GF(2), or None if inconsistent."""
    a = as_gf2(mat)
    b = as_gf2(rhs).reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ValueError("shape mismatch")
    aug = np.hstack([a, b])
    r, pivots = rref(aug)
    ncols = a.shape[1]
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.uint8)
    for i, col in enumerate(pivots):
        x[col] = r[i, -1]
    return x


def nullspace(mat: np.ndarray) -> np.ndarray:
    """Basis of the right nullspace, one vector per row."""
    a = as_gf2(mat)
    ncols = a.shape[1]
    if a.shape[0] == 0 or a.size == 0:
        return np.eye(ncols, dtype=np.uint8)
    r, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.uint8)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = r[i, fc]
    return basis


def min_weight_solution(mat: np.ndarray, rhs: np.ndarray, enum_limit: int = 4096):
    """Lowest-Hamming-weight solution of mat @ x = rhs, if one exists.

    Enumerates the whole solution coset when it has at most enum_limit
    elements; otherwise settles for the particular solution.  Ties broken
    toward the lexicographically smallest support, so the result is
    deterministic.
    """
    part = solve(mat, rhs)
    if part is None:
        return None
    basis = nullspace(mat)
    dim = basis.shape[0]
    if dim == 0 or 2**dim > enum_limit:
        return part
    best = part
    best_key = (int(part.sum()), tuple(np.nonzero(part)[0]))
    for bits in itertools.product((0, 1), repeat=dim):
        cand = part.copy()
        for take, vec in zip(bits, basis):
            if take:
                cand ^= vec
        key = (int(cand.sum()), tuple(np.nonzero(cand)[0]))
        if key < best_key:
            best, best_key = cand, key
    return best
