"""Small dense matrices over rational functions."""

from __future__ import annotations

from typing import Sequence

from .ratexpr import RatExpr

Matrix = list  # list[list[RatExpr]]


def det(rows: Sequence[Sequence[RatExpr]]) -> RatExpr:
    """Determinant by Gaussian elimination over the field of rational functions."""
    a = [[RatExpr.coerce(e) for e in row] for row in rows]
    n = len(a)
    if n == 0:
        return RatExpr.const(1)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    result = RatExpr.const(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if not a[i][col].is_zero()), None)
        if pivot is None:
            return RatExpr.const(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        for i in range(col + 1, n):
            if a[i][col].is_zero():
                continue
            f = a[i][col] / p
            a[i] = [x - f * y if k >= col else x for k, (x, y) in enumerate(zip(a[i], a[col]))]
    return result


def matmul(a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        if len(row) != inner:
            raise ValueError("shape mismatch in matrix product")
        new = []
        for j in range(cols):
            acc = RatExpr.const(0)
            for k in range(inner):
                if not row[k].is_zero() and not b[k][j].is_zero():
                    acc = acc + row[k] * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def jacobian(funcs: Sequence[RatExpr], names: Sequence[str]) -> Matrix:
    return [[f.diff(v) for v in names] for f in funcs]


def identity(n: int) -> Matrix:
    return [[RatExpr.const(1 if i == j else 0) for j in range(n)] for i in range(n)]


def subs_matrix(m: Matrix, mapping) -> Matrix:
    return [[e.subs(mapping) for e in row] for row in m]
