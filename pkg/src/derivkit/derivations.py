"""Derivation algebras: Der(A) as the nullspace of the Leibniz system.

A linear map is an n x n matrix ``D`` whose column j is the image of e_{j+1};
``D[r][s]`` is the coefficient of e_{r+1} in D(e_{s+1}).  The vectorisation
used everywhere is row-major: unknown ``r * n + s``.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .algebra import Algebra, basis_vector, multiply
from .linalg import DimensionMismatch, Echelon
from .poly import Poly
from .scalar import ZERO, Scalar

__all__ = [
    "DerivationSpace",
    "leibniz_rows",
    "leibniz_matrix",
    "derivation_space",
    "evaluation_map",
    "symbolic_evaluation_map",
    "is_derivation",
    "leibniz_residuals",
    "vec",
    "unvec",
    "apply",
    "commutator",
]


def vec(m) -> list:
    return [x for row in m for x in row]


def unvec(v, n: int) -> list:
    return [list(v[r * n:(r + 1) * n]) for r in range(n)]


def apply(m, x) -> list:
    return linalg.matvec(m, x)


def commutator(a, b) -> list:
    return linalg.mat_sub(linalg.matmul(a, b), linalg.matmul(b, a))


def leibniz_rows(a: Algebra):
    """Yield ``((i, j, k), sparse_row)`` for every constraint, 0-based."""
    n = a.n
    c = a.c
    for i in range(n):
        for j in range(n):
            cij = c[i][j]
            for k in range(n):
                row: dict = {}

                def put(var, val):
                    v = row.get(var, ZERO) + val
                    if v:
                        row[var] = v
                    else:
                        row.pop(var, None)

                for m in range(n):
                    if cij[m]:
                        put(k * n + m, cij[m])
                for r in range(n):
                    x = c[r][j][k]
                    if x:
                        put(r * n + i, -x)
                    y = c[i][r][k]
                    if y:
                        put(r * n + j, -y)
                yield (i, j, k), row


def leibniz_matrix(a: Algebra) -> list:
    """Dense n^3 x n^2 constraint matrix; row (i, j, k) at index (i*n + j)*n + k."""
    n = a.n
    out = []
    for _, row in leibniz_rows(a):
        dense = [ZERO] * (n * n)
        for var, val in row.items():
            dense[var] = val
        out.append(dense)
    return out


@dataclass(frozen=True, eq=False)
class DerivationSpace:
    ambient: Algebra
    basis: tuple  # of n x n matrices, canonical (RREF of vectorisations)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.ambient.n

    def vectors(self) -> list:
        return [vec(b) for b in self.basis]

    def from_coords(self, coords) -> list:
        n = self.n
        out = linalg.zeros(n, n)
        for c, b in zip(coords, self.basis):
            if not c:
                continue
            for r in range(n):
                br, orow = b[r], out[r]
                for s in range(n):
                    if br[s]:
                        orow[s] = orow[s] + c * br[s]
        return out

    def coords(self, d) -> list | None:
        """Coordinates of ``d`` in the basis, or None if ``d`` is not in the span."""
        if not self.basis:
            return [] if not any(vec(d)) else None
        cols = linalg.transpose(self.vectors())
        return linalg.solve(cols, vec(d))

    def contains(self, d) -> bool:
        return self.coords(d) is not None

    def echelon(self) -> Echelon:
        return linalg.echelon_of(self.vectors(), self.n * self.n)


def derivation_space(a: Algebra) -> DerivationSpace:
    n = a.n
    e = Echelon(n * n)
    for _, row in leibniz_rows(a):
        if row:
            e.add(row)
    null = e.nullspace()
    canon = linalg.row_space(null, n * n)
    return DerivationSpace(a, tuple(unvec(v, n) for v in canon))


def evaluation_map(s: DerivationSpace, x) -> list:
    """n x dim(S) matrix whose column t is (basis[t])(x)."""
    if len(x) != s.n:
        raise DimensionMismatch(f"element must have {s.n} coordinates")
    cols = [apply(b, x) for b in s.basis]
    if not cols:
        return [[] for _ in range(s.n)]
    return linalg.transpose(cols)


def symbolic_evaluation_map(s: DerivationSpace) -> list:
    """Polynomial matrix in x1..xn; entry (i, t) = sum_j basis[t][i][j] * x_j."""
    n = s.n
    return [[Poly.linear(b[i]) for b in s.basis] for i in range(n)]


def leibniz_residuals(d, a: Algebra) -> dict:
    """{(i, j): D(e_i e_j) - D(e_i) e_j - e_i D(e_j)} for nonzero residuals, 1-based."""
    n = a.n
    if len(d) != n or any(len(r) != n for r in d):
        raise DimensionMismatch(f"map must be {n}x{n}")
    images = [[d[r][s] for r in range(n)] for s in range(n)]
    out = {}
    for i in range(n):
        ei = basis_vector(n, i)
        for j in range(n):
            ej = basis_vector(n, j)
            lhs = apply(d, multiply(a, ei, ej))
            r1 = multiply(a, images[i], ej)
            r2 = multiply(a, ei, images[j])
            res = [p - q - w for p, q, w in zip(lhs, r1, r2)]
            if any(res):
                out[(i + 1, j + 1)] = res
    return out


def is_derivation(d, a: Algebra) -> tuple[bool, dict]:
    res = leibniz_residuals(d, a)
    return not res, res
