"""Linear solving over exact rational expressions.

Gaussian elimination with a pivot preference for nonzero constants.  When
``declare_pivots`` is set, a non-constant pivot is declared invertible in
the registry (and recorded) before dividing by it; otherwise the division
may raise DivisionByNonInvertible, which callers treat as "cannot decide".
"""

from __future__ import annotations

from .expr import Expression


class LinearSolution:
    __slots__ = ("values", "pivot_cols", "free_cols", "residuals", "declared")

    def __init__(self, values, pivot_cols, free_cols, residuals, declared):
        self.values = values
        self.pivot_cols = pivot_cols
        self.free_cols = free_cols
        self.residuals = residuals
        self.declared = declared

    @property
    def consistent(self) -> bool:
        return all(r.is_zero for r in self.residuals)


def solve_linear(reg, rows, rhs, declare_pivots=False) -> LinearSolution:
    """Solve rows * x = rhs; free unknowns are set to zero."""
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    aug = [list(row) + [r] for row, r in zip(rows, rhs)]
    declared = []
    pivot_of_col = {}
    row_used = [False] * m
    for col in range(ncols):
        pick = None
        for r in range(m):
            if row_used[r] or aug[r][col].is_zero:
                continue
            if aug[r][col].constant_value() is not None:
                pick = r
                break
            if pick is None:
                pick = r
        if pick is None:
            continue
        pivot = aug[pick][col]
        if pivot.constant_value() is None and declare_pivots:
            fid = reg.declare(pivot.num.primitive())
            declared.append(reg.entries[fid])
        inv = pivot.inverse() if pivot.constant_value() is None else None
        for r in range(m):
            if r == pick or aug[r][col].is_zero:
                continue
            if inv is None:
                factor = aug[r][col] / pivot
            else:
                factor = aug[r][col] * inv
            for c in range(col, ncols + 1):
                aug[r][c] = aug[r][c] - factor * aug[pick][c]
        row_used[pick] = True
        pivot_of_col[col] = pick
    zero = Expression.zero(reg)
    values = []
    for col in range(ncols):
        r = pivot_of_col.get(col)
        if r is None:
            values.append(zero)
        else:
            values.append(aug[r][ncols] / aug[r][col])
    residuals = [aug[r][ncols] for r in range(m) if not row_used[r]]
    free_cols = [c for c in range(ncols) if c not in pivot_of_col]
    return LinearSolution(values, sorted(pivot_of_col), free_cols, residuals, declared)


def determinant(reg, matrix) -> Expression:
    n = len(matrix)
    if n == 0:
        return Expression.const(reg, 1)
    if n == 1:
        return matrix[0][0]
    out = Expression.zero(reg)
    for j in range(n):
        entry = matrix[0][j]
        if entry.is_zero:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * determinant(reg, minor)
        out = out + (term if j % 2 == 0 else -term)
    return out
