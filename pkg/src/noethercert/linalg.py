"""Fraction-free (Bareiss) Gaussian elimination over the rationals.

Pivoting is deterministic: columns are scanned left to right and the
first remaining row with a nonzero entry in the column is used.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from .errors import DEFAULT_LIMITS, Limits, ResourceBound


def _integer_rows(rows: Sequence[Sequence]) -> List[List[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def _check_size(nrows: int, ncols: int, limits: Limits):
    if nrows * ncols > limits.max_matrix_cells:
        raise ResourceBound(f"matrix {nrows}x{ncols} exceeds the size cap")


def bareiss_echelon(rows: Sequence[Sequence], ncols: Optional[int] = None,
                    limits: Limits = DEFAULT_LIMITS) -> Tuple[List[List[int]], List[int]]:
    """Row echelon form with integer entries; returns (matrix, pivot columns)."""
    M = _integer_rows(rows)
    if ncols is None:
        ncols = len(M[0]) if M else 0
    _check_size(len(M), ncols, limits)
    nrows = len(M)
    pivots: List[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if M[i][c]), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
        piv_row = M[r]
        pv = piv_row[c]
        for i in range(r + 1, nrows):
            row = M[i]
            f = row[c]
            if f:
                for j in range(c, ncols):
                    row[j] = (pv * row[j] - f * piv_row[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (pv * row[j]) // prev
        pivots.append(c)
        prev = pv
        r += 1
    return M, pivots


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None, limits: Limits = DEFAULT_LIMITS) -> int:
    if not rows:
        return 0
    _, pivots = bareiss_echelon(rows, ncols, limits)
    return len(pivots)


def solve(A: Sequence[Sequence], b: Sequence, limits: Limits = DEFAULT_LIMITS) -> Optional[List[Fraction]]:
    """A particular solution of A x = b (free variables set to 0), or None."""
    ncols = len(A[0]) if A else 0
    if not A:
        return [Fraction(0)] * ncols if all(x == 0 for x in b) else None
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    M, pivots = bareiss_echelon(aug, ncols + 1, limits)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = M[r]
        s = Fraction(row[ncols])
        for j in range(c + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x
