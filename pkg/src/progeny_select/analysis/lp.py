"""Exact rational simplex for small LPs of the form ``max c.x  s.t.  A x <= b, x >= 0, b >= 0``.

With ``b >= 0`` the slack basis is feasible, so a single phase suffices.
Bland's rule picks entering and leaving variables, which rules out cycling on
the heavily degenerate instances this module is used for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Number = int | Fraction


class LpError(ValueError):
    pass


class Unbounded(LpError):
    pass


@dataclass(frozen=True)
class LpSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    duals: tuple[Fraction, ...]


def maximize(c: Sequence[Number], A: Sequence[Sequence[Number]], b: Sequence[Number]) -> LpSolution:
    m, n = len(A), len(c)
    if len(b) != m or any(len(row) != n for row in A):
        raise LpError("shape mismatch between c, A and b")
    if any(v < 0 for v in b):
        raise LpError("right-hand sides must be non-negative")

    # rows: [A | I | b]; objective row holds reduced costs, -c initially
    width = n + m
    rows = [
        [Fraction(v) for v in A[r]] + [Fraction(int(r == s)) for s in range(m)] + [Fraction(b[r])]
        for r in range(m)
    ]
    obj = [-Fraction(v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = list(range(n, n + m))

    while True:
        entering = next((j for j in range(width) if obj[j] < 0), None)
        if entering is None:
            break
        best = None
        for r in range(m):
            a = rows[r][entering]
            if a > 0:
                ratio = rows[r][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            raise Unbounded(f"objective unbounded along variable {entering}")
        r = best[1]
        piv = rows[r][entering]
        rows[r] = [v / piv for v in rows[r]]
        for rr in range(m):
            f = rows[rr][entering]
            if rr != r and f != 0:
                rows[rr] = [v - f * w for v, w in zip(rows[rr], rows[r])]
        f = obj[entering]
        obj = [v - f * w for v, w in zip(obj, rows[r])]
        basis[r] = entering

    x = [Fraction(0)] * width
    for r, var in enumerate(basis):
        x[var] = rows[r][-1]
    return LpSolution(obj[-1], tuple(x[:n]), tuple(obj[n:width]))


def check_optimality(
    c: Sequence[Number], A: Sequence[Sequence[Number]], b: Sequence[Number], sol: LpSolution
) -> list[str]:
    """Exact primal/dual feasibility and zero duality gap; returns failures (empty = optimal)."""
    problems = []
    m, n = len(A), len(c)
    x, y = sol.x, sol.duals
    if any(v < 0 for v in x):
        problems.append("primal x has a negative entry")
    for r in range(m):
        lhs = sum(Fraction(A[r][j]) * x[j] for j in range(n))
        if lhs > b[r]:
            problems.append(f"primal row {r}: {lhs} > {b[r]}")
    if any(v < 0 for v in y):
        problems.append("dual y has a negative entry")
    for j in range(n):
        lhs = sum(Fraction(A[r][j]) * y[r] for r in range(m))
        if lhs < c[j]:
            problems.append(f"dual column {j}: {lhs} < {c[j]}")
    primal = sum(Fraction(c[j]) * x[j] for j in range(n))
    dual = sum(Fraction(b[r]) * y[r] for r in range(m))
    if not primal == dual == sol.value:
        problems.append(f"duality gap: primal {primal}, dual {dual}, reported {sol.value}")
    return problems
