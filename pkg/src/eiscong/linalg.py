"""Dense linear solving over prime fields."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def solve_mod_prime(
    matrix: Sequence[Sequence[int]], rhs: Sequence[int], p: int
) -> list[int] | None:
    """One solution of matrix @ x = rhs over F_p, or None if inconsistent.

    Gaussian elimination with partial pivoting on the first nonzero
    entry of each column; free columns are assigned zero.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0:
        return [0] * cols
    dtype = np.int64 if p <= 2**31 else object
    aug = np.zeros((rows, cols + 1), dtype=dtype)
    for i, row in enumerate(matrix):
        if len(row) != cols:
            raise ValueError("ragged matrix")
        for j, x in enumerate(row):
            aug[i, j] = x % p
        aug[i, cols] = rhs[i] % p
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if aug[i, c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            aug[[r, pivot]] = aug[[pivot, r]]
        inv = pow(int(aug[r, c]), -1, p)
        aug[r] = (aug[r] * inv) % p
        for i in range(rows):
            if i != r and aug[i, c] != 0:
                aug[i] = (aug[i] - int(aug[i, c]) * aug[r]) % p
        pivot_cols.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i, cols] != 0:
            return None
    x = [0] * cols
    for i, c in enumerate(pivot_cols):
        x[c] = int(aug[i, cols])
    return x
