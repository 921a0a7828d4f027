"""Determinants: exact (Fraction) elimination and cofactor expansion over rings."""

from __future__ import annotations

from fractions import Fraction


def det_exact(rows) -> Fraction:
    """Determinant by Gaussian elimination in exact rational arithmetic."""
    m = [[Fraction(v) for v in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            f = m[r][col]
            if f == 0:
                continue
            f = f / p
            row_r, row_c = m[r], m[col]
            for c in range(col + 1, n):
                row_r[c] -= f * row_c[c]
    return det


def det_cofactor(rows, zero=0, one=1):
    """Determinant by memoized Laplace expansion along rows.

    Needs only ring operations (+, -, *), so it works for polynomial
    entries. Cost is ``O(n 2^n)`` products.
    """
    n = len(rows)
    if n == 0:
        return one
    memo = {}

    def sub(r, mask):
        # determinant of rows r.. over the columns in mask
        if r == n:
            return None
        key = mask
        if key in memo:
            return memo[key]
        total = zero
        sign_pos = 0
        for c in range(n):
            if not mask >> c & 1:
                continue
            entry = rows[r][c]
            rest_mask = mask & ~(1 << c)
            if not _is_zero(entry):
                rest = sub(r + 1, rest_mask)
                term = entry if rest is None else entry * rest
                total = total + term if sign_pos % 2 == 0 else total - term
            sign_pos += 1
        memo[key] = total
        return total

    return sub(0, (1 << n) - 1)


def _is_zero(value):
    is_zero = getattr(value, "is_zero", None)
    return is_zero() if callable(is_zero) else value == 0


def minor(matrix, k):
    """Rows/columns of ``matrix`` with index ``k`` removed."""
    return [[v for j, v in enumerate(row) if j != k] for i, row in enumerate(matrix) if i != k]
