"""Exact dense/sparse linear algebra over Q(i).

Matrices are plain lists of row lists of :class:`Scalar`.  Elimination runs
on sparse ``{column: Scalar}`` rows, which is what keeps the n^3 x n^2 Leibniz
systems tractable.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .scalar import ONE, ZERO, Scalar, as_scalar

Vector = list  # list[Scalar]
Matrix = list  # list[list[Scalar]]


class DimensionMismatch(ValueError):
    pass


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def to_matrix(rows) -> Matrix:
    return [[as_scalar(x) for x in row] for row in rows]


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def matvec(m: Matrix, v: Sequence[Scalar]) -> Vector:
    if m and len(m[0]) != len(v):
        raise DimensionMismatch(f"{len(m[0])} columns vs vector of length {len(v)}")
    nz = [(j, x) for j, x in enumerate(v) if x]
    out = []
    for row in m:
        acc = ZERO
        for j, x in nz:
            a = row[j]
            if a:
                acc = acc + a * x
        out.append(acc)
    return out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch("inner dimensions differ")
    bt = transpose(b) if b else []
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        new = []
        for col in bt:
            acc = ZERO
            for k, x in nz:
                y = col[k]
                if y:
                    acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a: Matrix) -> Matrix:
    c = as_scalar(c)
    return [[c * x for x in row] for row in a]


def is_zero_matrix(m: Matrix) -> bool:
    return not any(x for row in m for x in row)


def _sparse(row: Iterable[Scalar]) -> dict:
    return {j: x for j, x in enumerate(row) if x}


def _dense(row: dict, ncols: int) -> Vector:
    out = [ZERO] * ncols
    for j, x in row.items():
        out[j] = x
    return out


class Echelon:
    """Incrementally maintained reduced row echelon form.

    ``pivots`` maps pivot column -> normalized sparse row with a 1 in the
    pivot column and zeros in every other pivot column.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        pivots = self.pivots
        for c in [c for c in row if c in pivots]:
            f = row.get(c)
            if not f:
                continue
            for j, y in pivots[c].items():
                v = row.get(j, ZERO) - f * y
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
        return row

    def add(self, row, *, limit: int | None = None) -> bool:
        """Insert a row; return True when it was independent.

        ``limit`` restricts pivot columns to ``< limit``; a reduced row with
        support only at or beyond ``limit`` is reported by raising
        ``_Inconsistent`` (used for solving augmented systems).
        """
        if not isinstance(row, dict):
            row = _sparse(row)
        row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        if limit is not None and p >= limit:
            raise _Inconsistent(row)
        inv = row[p].inv()
        if inv != ONE:
            row = {j: x * inv for j, x in row.items()}
        for prow in self.pivots.values():
            f = prow.get(p)
            if f:
                for j, y in row.items():
                    v = prow.get(j, ZERO) - f * y
                    if v:
                        prow[j] = v
                    else:
                        prow.pop(j, None)
        self.pivots[p] = row
        return True

    def contains(self, row) -> bool:
        if not isinstance(row, dict):
            row = _sparse(row)
        return not self.reduce(row)

    def basis(self) -> list[Vector]:
        """Canonical RREF rows ordered by pivot column."""
        return [_dense(self.pivots[p], self.ncols) for p in sorted(self.pivots)]

    def nullspace(self) -> list[Vector]:
        free = [j for j in range(self.ncols) if j not in self.pivots]
        out = []
        for f in free:
            v = [ZERO] * self.ncols
            v[f] = ONE
            for p, prow in self.pivots.items():
                y = prow.get(f)
                if y:
                    v[p] = -y
            out.append(v)
        return out


class _Inconsistent(Exception):
    def __init__(self, row):
        super().__init__("inconsistent system")
        self.row = row


def echelon_of(rows: Iterable, ncols: int) -> Echelon:
    e = Echelon(ncols)
    for r in rows:
        e.add(r)
    return e


def rank(m: Matrix) -> int:
    rows, cols = shape(m)
    return echelon_of(m, cols).rank


def nullspace(m: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of {v : m v = 0}, one vector per free column of the RREF."""
    cols = ncols if ncols is not None else shape(m)[1]
    return echelon_of(m, cols).nullspace()


def left_nullspace(m: Matrix) -> list[Vector]:
    """Basis of {w : w^T m = 0}."""
    rows, cols = shape(m)
    if cols == 0:
        return [[ONE if i == j else ZERO for j in range(rows)] for i in range(rows)]
    return nullspace(transpose(m), rows)


def solve(m: Matrix, b: Sequence[Scalar]) -> Vector | None:
    """One exact solution of m x = b (free variables set to 0), or None."""
    rows, cols = shape(m)
    if len(b) != rows:
        raise DimensionMismatch("right-hand side length differs from row count")
    e = Echelon(cols + 1)
    try:
        for row, rhs in zip(m, b):
            sp = _sparse(row)
            if rhs:
                sp[cols] = rhs
            e.add(sp, limit=cols)
    except _Inconsistent:
        return None
    x = [ZERO] * cols
    for p, prow in e.pivots.items():
        x[p] = prow.get(cols, ZERO)
    return x


def row_space(rows: Iterable, ncols: int) -> list[Vector]:
    return echelon_of(rows, ncols).basis()


def span_contains(basis: Iterable, vectors: Iterable, ncols: int) -> bool:
    e = echelon_of(basis, ncols)
    return all(e.contains(v) for v in vectors)


def same_span(a: Iterable, b: Iterable, ncols: int) -> bool:
    return row_space(a, ncols) == row_space(b, ncols)


def combine(coeffs: Sequence[Scalar], vectors: Sequence[Vector]) -> Vector:
    if not vectors:
        return []
    out = [ZERO] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if not c:
            continue
        for j, x in enumerate(v):
            if x:
                out[j] = out[j] + c * x
    return out


def format_matrix(m: Matrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in m]


def is_scalar(x) -> bool:
    return type(x) is Scalar
