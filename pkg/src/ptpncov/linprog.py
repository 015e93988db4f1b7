"""Exact-rational linear programming, small scale.

Two-phase tableau simplex with Bland's rule over fractions.Fraction.  Used to
land on cost-minimal polyhedron vertices during run retiming; a handful of
variables and a few dozen rows, so simplicity beats sparsity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def _pivot(tab: List[List[Fraction]], basis: List[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    for r in range(len(tab)):
        if r != row and tab[r][col] != 0:
            factor = tab[r][col]
            tab[r] = [a - factor * b for a, b in zip(tab[r], tab[row])]
    basis[row] = col


def _run_simplex(tab: List[List[Fraction]], basis: List[int], ncols: int) -> None:
    """Minimize the objective stored in the last tableau row (Bland's rule)."""
    while True:
        obj = tab[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return
        best_row, best_ratio = None, None
        for r in range(len(tab) - 1):
            if tab[r][col] > 0:
                ratio = tab[r][-1] / tab[r][col]
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[best_row])
                ):
                    best_row, best_ratio = r, ratio
        if best_row is None:
            raise Unbounded()
        _pivot(tab, basis, best_row, col)


def solve_lp(
    objective: Sequence[Fraction],
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
) -> Tuple[Fraction, List[Fraction]]:
    """min objective . v  s.t.  rows . v <= rhs, v >= 0.

    Returns (optimal value, an optimal vertex).  Raises Infeasible/Unbounded.
    """
    d = len(objective)
    m = len(rows)
    obj = [Fraction(c) for c in objective]

    # A v + s = b with s >= 0; flip rows with negative b for phase 1.
    a = [[Fraction(x) for x in row] + [Fraction(0)] * m + [Fraction(b)] for row, b in zip(rows, rhs)]
    for i in range(m):
        a[i][d + i] = Fraction(1)
    for i in range(m):
        if a[i][-1] < 0:
            a[i] = [-x for x in a[i]]

    # Phase 1: artificial variables.
    ncols = d + m
    art0 = ncols
    for i in range(m):
        a[i] = a[i][:-1] + [Fraction(0)] * m + [a[i][-1]]
        a[i][art0 + i] = Fraction(1)
    basis = [art0 + i for i in range(m)]
    phase1 = [Fraction(0)] * (ncols + m) + [Fraction(0)]
    for i in range(m):
        phase1 = [p - x for p, x in zip(phase1, a[i])]
    tab = [row[:] for row in a] + [phase1]
    _run_simplex(tab, basis, ncols + m)
    if tab[-1][-1] != 0:
        raise Infeasible()
    # Drive leftover artificial variables out of the basis.
    for r in range(m):
        if basis[r] >= art0:
            col = next((j for j in range(ncols) if tab[r][j] != 0), None)
            if col is None:
                continue  # redundant row
            _pivot(tab, basis, r, col)

    # Phase 2.
    tab = [row[:ncols] + [row[-1]] for row in tab[:-1]]
    obj_row = [Fraction(x) for x in obj] + [Fraction(0)] * m + [Fraction(0)]
    tab.append(obj_row)
    for r in range(m):
        if basis[r] < ncols and tab[-1][basis[r]] != 0:
            factor = tab[-1][basis[r]]
            tab[-1] = [a2 - factor * b2 for a2, b2 in zip(tab[-1], tab[r])]
    _run_simplex(tab, basis, ncols)

    point = [Fraction(0)] * d
    for r in range(m):
        if basis[r] < d:
            point[basis[r]] = tab[r][-1]
    value = sum(c * v for c, v in zip(obj, point))
    return value, point


def lexmin_vertex(
    objective: Sequence[Fraction],
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
) -> Tuple[Fraction, List[Fraction]]:
    """Optimal vertex that is lexicographically least among optimal points."""
    d = len(objective)
    value, _ = solve_lp(objective, rows, rhs)
    cur_rows = [list(r) for r in rows]
    cur_rhs = list(rhs)
    cur_rows.append(list(objective))
    cur_rhs.append(value)
    cur_rows.append([-c for c in objective])
    cur_rhs.append(-value)
    point: List[Optional[Fraction]] = [None] * d
    for i in range(d):
        unit = [Fraction(0)] * d
        unit[i] = Fraction(1)
        vi, _ = solve_lp(unit, cur_rows, cur_rhs)
        point[i] = vi
        cur_rows.append(unit[:])
        cur_rhs.append(vi)
        cur_rows.append([-u for u in unit])
        cur_rhs.append(-vi)
    return value, [Fraction(p) for p in point]
