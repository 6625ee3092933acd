"""Small dense linear algebra over F2 on uint8 numpy arrays."""
from __future__ import annotations

import numpy as np


def row_reduce(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = (np.array(mat, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        mask = a[:, c].astype(bool)
        mask[r] = False
        a[mask] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat: np.ndarray) -> int:
    if np.size(mat) == 0:
        return 0
    return len(row_reduce(mat)[1])


def is_invertible(mat: np.ndarray) -> bool:
    mat = np.asarray(mat)
    return mat.ndim == 2 and mat.shape[0] == mat.shape[1] and rank(mat) == mat.shape[0]


def inverse(mat: np.ndarray) -> np.ndarray:
    mat = np.asarray(mat, dtype=np.uint8)
    k = mat.shape[0]
    red, piv = row_reduce(np.hstack([mat, np.eye(k, dtype=np.uint8)]))
    if piv[:k] != list(range(k)):
        raise np.linalg.LinAlgError("matrix is singular over F2")
    return red[:, k:]


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64) % 2).astype(np.uint8)


def in_row_space(basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Membership of each row of ``vectors`` in the row space of ``basis``."""
    vectors = np.atleast_2d(vectors)
    red, piv = row_reduce(basis)
    red = red[: len(piv)]
    out = np.empty(len(vectors), dtype=bool)
    for t, v in enumerate(vectors):
        v = np.array(v, dtype=np.uint8) & 1
        for row, c in zip(red, piv):
            if v[c]:
                v ^= row
        out[t] = not v.any()
    return out
