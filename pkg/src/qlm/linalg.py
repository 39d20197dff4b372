"""Exact linear algebra over the rationals.

Nullspaces of evaluation matrices are computed by fraction-free
(Bareiss) Gaussian elimination over the integers: rows are cleared of
denominators first, which leaves the nullspace untouched, and the
one-step cross-multiplication with exact division by the previous pivot
keeps every intermediate entry an actual minor of the input matrix.
Back-substitution then recovers rational nullspace vectors.

When gmpy2 is installed its integers are used for the elimination,
which speeds up the large-minor stage considerably; results are
identical either way.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int


def clear_denominators(row: Sequence[Fraction]) -> list[int]:
    """Scale one row to integers; row scaling preserves the nullspace."""
    scale = lcm(*(c.denominator for c in row)) if row else 1
    return [int(c * scale) for c in row]


def bareiss_echelon(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list], list[int]]:
    """Row echelon form by fraction-free elimination with row pivoting.

    Returns (echelon_rows, pivot_cols); echelon rows are integer vectors
    whose entries are minors of the input, one row per pivot column.
    """
    work = [[_mpz(x) for x in row] for row in rows if any(row)]
    echelon: list[list] = []
    pivot_cols: list[int] = []
    prev_pivot = _mpz(1)
    col = 0
    while col < ncols and work:
        pivot_row = None
        for r in work:
            if r[col]:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        work.remove(pivot_row)
        lead = pivot_row[col]
        remaining = []
        for r in work:
            f = r[col]
            if f:
                new = [(lead * r[j] - f * pivot_row[j]) // prev_pivot for j in range(ncols)]
            else:
                new = [(lead * r[j]) // prev_pivot for j in range(ncols)]
            if any(new):
                remaining.append(new)
        echelon.append(pivot_row)
        pivot_cols.append(col)
        prev_pivot = lead
        work = remaining
        col += 1
    return echelon, pivot_cols


def nullspace_from_echelon(
    echelon: Sequence[Sequence[int]], pivot_cols: Sequence[int], ncols: int
) -> list[list[Fraction]]:
    """One nullspace vector per free column, unit at that column."""
    free_cols = [c for c in range(ncols) if c not in set(pivot_cols)]
    basis: list[list[Fraction]] = []
    for f in free_cols:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(reversed(echelon), reversed(list(pivot_cols))):
            s = Fraction(0)
            for c in range(p + 1, ncols):
                if v[c] and row[c]:
                    s += Fraction(int(row[c])) * v[c]
            v[p] = -s / int(row[p])
        basis.append(v)
    return basis


def integer_nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[list[Fraction]]:
    echelon, pivots = bareiss_echelon(rows, ncols)
    return nullspace_from_echelon(echelon, pivots, ncols)


def incremental_nullspace(
    rows: Sequence[Sequence[Fraction]], ncols: int, head: int | None = None
) -> list[list[Fraction]]:
    """Exact nullspace of a tall matrix, cheaply.

    Eliminates an initial block of rows, then checks the remaining rows
    against the candidate basis by exact dot products; any violating row
    is added to the block and the elimination redone.  The result equals
    the full-matrix nullspace exactly, but the expensive elimination
    normally touches barely more than ncols rows.
    """
    int_rows = [clear_denominators(r) for r in rows]
    if head is None:
        head = ncols + 32
    used = min(head, len(int_rows))
    while True:
        basis = integer_nullspace(int_rows[:used], ncols)
        if not basis or used >= len(int_rows):
            return basis
        int_basis = [clear_denominators(v) for v in basis]
        violation = None
        for idx in range(used, len(int_rows)):
            row = int_rows[idx]
            for v in int_basis:
                if sum(r * x for r, x in zip(row, v) if x):
                    violation = idx
                    break
            if violation is not None:
                break
        if violation is None:
            return basis
        # degenerate head block: extend past the violating row and retry
        used = max(violation + 1, used + 32)


def rational_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank of a small rational matrix."""
    rows = [r for r in (clear_denominators(row) for row in matrix) if any(r)]
    if not rows:
        return 0
    _, pivots = bareiss_echelon(rows, len(rows[0]))
    return len(pivots)
