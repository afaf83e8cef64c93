"""Exact-rational feasibility for small linear systems (phase-1 simplex).

Solves ``A x <= b, x >= 0`` over the rationals.  Bland's rule keeps the
method finite; every arithmetic step uses :class:`fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction


def find_feasible_point(A, b, n: int) -> list[Fraction] | None:
    """Return some x >= 0 with A x <= b, or None if none exists.

    ``A`` is a list of sparse rows ``{column: coefficient}``; ``n`` is the
    number of variables.
    """
    m = len(A)
    # columns: x (n), slacks (m), artificials (one per row with b < 0)
    need_art = [Fraction(b[i]) < 0 for i in range(m)]
    n_art = sum(need_art)
    width = n + m + n_art
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []
    art_col = n + m
    zero = Fraction(0)
    for i in range(m):
        row = [zero] * width
        bi = Fraction(b[i])
        sign = -1 if need_art[i] else 1
        for j, a in A[i].items():
            row[j] = Fraction(a) * sign
        row[n + i] = Fraction(sign)
        if need_art[i]:
            row[art_col] = Fraction(1)
            basis.append(art_col)
            art_col += 1
        else:
            basis.append(n + i)
        rows.append(row)
        rhs.append(bi * sign)
    if n_art == 0:
        return [zero] * n

    # reduced costs for minimising the sum of artificials
    cost = [zero] * width
    obj = zero
    for i in range(m):
        if need_art[i]:
            for j in range(width):
                if rows[i][j]:
                    cost[j] -= rows[i][j]
            obj -= rhs[i]
    for j in range(n + m, width):
        cost[j] = zero

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen in phase 1 (objective bounded below by 0)
            raise ArithmeticError("unbounded phase-1 problem")
        prow = rows[leave]
        piv = prow[enter]
        if piv != 1:
            prow[:] = [v / piv for v in prow]
            rhs[leave] /= piv
        nz = [j for j in range(width) if prow[j]]
        for i in range(m):
            if i != leave:
                f = rows[i][enter]
                if f:
                    r = rows[i]
                    for j in nz:
                        r[j] -= f * prow[j]
                    rhs[i] -= f * rhs[leave]
        f = cost[enter]
        for j in nz:
            cost[j] -= f * prow[j]
        obj -= f * rhs[leave]
        basis[leave] = enter

    if obj != 0:
        return None
    x = [zero] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rhs[i]
    return x
