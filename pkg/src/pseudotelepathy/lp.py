"""Exact two-phase simplex.

Solves::

    maximize    c . x
    subject to  A_eq x == b_eq,  A_ub x <= b_ub,  x >= 0

Inputs and outputs are :class:`fractions.Fraction`; the tableau itself runs on
``gmpy2.mpq``, which is exact and an order of magnitude faster. Rows are stored
sparsely as ``{column: coefficient}`` dicts since the non-signaling tableaux
are mostly zeros. Pivoting follows Bland's rule with respect to a configurable
variable order, which guarantees termination for every order and gives a
cheap way to rerun the same problem along a different pivot path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from gmpy2 import mpq

Row = dict[int, mpq]


class LPError(RuntimeError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass
class LPResult:
    value: Fraction
    x: list[Fraction]
    pivots: int
    dropped_rows: int = 0
    basis: list[int] = field(default_factory=list)


def _q(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


def _frac(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def _sparse(row) -> Row:
    items = row.items() if isinstance(row, Mapping) else enumerate(row)
    return {j: _q(v) for j, v in items if v}


def _width(row) -> int:
    if isinstance(row, Mapping):
        return max(row, default=-1) + 1
    return len(row)


def _axpy(row: Row, f: mpq, other: Row) -> None:
    """row -= f * other, dropping exact zeros."""
    for k, v in other.items():
        nv = row.get(k, 0) - f * v
        if nv:
            row[k] = nv
        else:
            del row[k]


class _Tableau:
    def __init__(self, rows: list[Row], rhs: list[mpq], basis: list[int], rank: Sequence[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.rank = rank
        self.obj: Row = {}
        self.obj_rhs = mpq(0)
        self.pivots = 0

    def set_objective(self, c: Row) -> None:
        # reduced costs c_j - c_B B^-1 A_j; obj_rhs holds -z
        obj = dict(c)
        obj_rhs = mpq(0)
        for i, b in enumerate(self.basis):
            cb = obj.get(b)
            if cb:
                _axpy(obj, cb, self.rows[i])
                obj_rhs -= cb * self.rhs[i]
        self.obj, self.obj_rhs = obj, obj_rhs

    def pivot(self, r: int, j: int) -> None:
        prow = self.rows[r]
        p = prow[j]
        if p != 1:
            prow = {k: v / p for k, v in prow.items()}
            self.rows[r] = prow
            self.rhs[r] /= p
        pr = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row.get(j)
                if f:
                    _axpy(row, f, prow)
                    self.rhs[i] -= f * pr
        f = self.obj.get(j)
        if f:
            _axpy(self.obj, f, prow)
            self.obj_rhs -= f * pr
        self.basis[r] = j
        self.pivots += 1

    def run(self, max_pivots: int = 200_000) -> None:
        rank = self.rank
        while True:
            candidates = [j for j, v in self.obj.items() if v > 0]
            if not candidates:
                return
            j = min(candidates, key=rank.__getitem__)
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(j)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, rank[self.basis[i]])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded(f"column {j} is unbounded")
            self.pivot(best[1], j)
            if self.pivots > max_pivots:
                raise LPError("pivot limit exceeded")


def independent_rows(rows: Sequence[Mapping], rhs: Sequence) -> list[int]:
    """Indices of a maximal linearly independent subset of equality rows.

    Raises :class:`Infeasible` if a dependent row contradicts the others.
    """
    reduced: list[tuple[int, Row, mpq]] = []
    keep = []
    for k, (raw, b) in enumerate(zip(rows, rhs)):
        row, b = _sparse(raw), _q(b)
        for col, prow, pb in reduced:
            f = row.get(col)
            if f:
                _axpy(row, f, prow)
                b -= f * pb
        if not row:
            if b != 0:
                raise Infeasible(f"equality row {k} contradicts earlier rows")
            continue
        col = min(row)
        p = row[col]
        row = {j: v / p for j, v in row.items()}
        reduced.append((col, row, b / p))
        keep.append(k)
    return keep


def linprog_exact(
    c,
    A_eq=(),
    b_eq=(),
    A_ub=(),
    b_ub=(),
    *,
    order: Sequence[int] | None = None,
    seed: int | None = None,
    presolve: bool = False,
) -> LPResult:
    """Maximise ``c . x`` exactly.

    ``order`` lists the structural variables from highest to lowest Bland
    priority; ``seed`` shuffles that order instead. Slack and artificial
    variables always rank after the structural ones. ``presolve`` drops
    linearly dependent equality rows before phase one; otherwise phase one
    discovers and drops them itself.
    """
    if len(A_eq) != len(b_eq) or len(A_ub) != len(b_ub):
        raise LPError("constraint matrix and right-hand side lengths differ")
    n = _width(c)
    for a in list(A_eq) + list(A_ub):
        n = max(n, _width(a))
    c = _sparse(c)
    eq = [(_sparse(a), _q(b)) for a, b in zip(A_eq, b_eq)]
    ub = [(_sparse(a), _q(b)) for a, b in zip(A_ub, b_ub)]
    n_eq = len(eq)
    if presolve and eq:
        eq = [eq[k] for k in independent_rows([a for a, _ in eq], [b for _, b in eq])]

    rows: list[Row] = []
    rhs: list[mpq] = []
    basis: list[int] = []
    artificials: list[int] = []
    next_col = n + len(ub)
    for k, (a, b) in enumerate(ub):
        row = dict(a)
        row[n + k] = mpq(1)
        if b < 0:
            row = {j: -v for j, v in row.items()}
            b = -b
            row[next_col] = mpq(1)
            basis.append(next_col)
            artificials.append(next_col)
            next_col += 1
        else:
            basis.append(n + k)
        rows.append(row)
        rhs.append(b)
    for a, b in eq:
        row = dict(a)
        if b < 0:
            row = {j: -v for j, v in row.items()}
            b = -b
        row[next_col] = mpq(1)
        basis.append(next_col)
        artificials.append(next_col)
        next_col += 1
        rows.append(row)
        rhs.append(b)

    if order is None:
        order = list(range(n))
        if seed is not None:
            random.Random(seed).shuffle(order)
    if sorted(order) != list(range(n)):
        raise LPError("order must be a permutation of the structural variables")
    rank = list(range(next_col))
    for pos, j in enumerate(order):
        rank[j] = pos

    tab = _Tableau(rows, rhs, basis, rank)
    art = set(artificials)
    dropped = n_eq - len(eq)
    if art:
        tab.set_objective({j: mpq(-1) for j in art})
        tab.run()
        if tab.obj_rhs != 0:
            raise Infeasible(f"phase one ended with infeasibility {-tab.obj_rhs}")
        # drive zero-level artificials out; a row with nothing else left is redundant
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] in art:
                row = tab.rows[i]
                j = min((k for k in row if k not in art), key=rank.__getitem__, default=None)
                if j is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    dropped += 1
                    continue
                tab.pivot(i, j)
            i += 1
        for row in tab.rows:
            for j in art.intersection(row):
                del row[j]

    tab.set_objective(c)
    tab.run()
    x = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = _frac(tab.rhs[i])
    value = sum((_frac(v) * x[j] for j, v in c.items()), Fraction(0))
    if value != _frac(-tab.obj_rhs):
        raise LPError("objective bookkeeping drifted")
    return LPResult(value, x, tab.pivots, dropped, list(tab.basis))
