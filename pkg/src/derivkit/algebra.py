"""Finite-dimensional algebras given by structure constants."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import linalg
from .scalar import ZERO, Scalar, as_scalar

__all__ = [
    "Algebra",
    "NotNilpotent",
    "multiply",
    "power_chain",
    "chi",
    "classify_shape",
    "check_associativity",
    "basis_vector",
]


class NotNilpotent(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Algebra:
    """``c[i][j][k]`` is the coefficient of e_{k+1} in e_{i+1} e_{j+1}."""

    n: int
    c: tuple
    label: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        c = tuple(tuple(tuple(as_scalar(x) for x in cell) for cell in row) for row in self.c)
        if len(c) != self.n or any(len(r) != self.n or any(len(cell) != self.n for cell in r) for r in c):
            raise ValueError(f"structure tensor must be {self.n}x{self.n}x{self.n}")
        object.__setattr__(self, "c", c)
        # sparse products: (i, j) -> [(k, coeff)]
        prods = {}
        for i in range(self.n):
            for j in range(self.n):
                nz = [(k, x) for k, x in enumerate(c[i][j]) if x]
                if nz:
                    prods[(i, j)] = nz
        object.__setattr__(self, "_products", prods)

    @classmethod
    def from_products(cls, n: int, products: dict, label: str = "", params=None) -> "Algebra":
        """Build from ``{(i, j): {k: coeff}}`` with 1-based basis indices."""
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (i, j), combo in products.items():
            for k, v in combo.items():
                c[i - 1][j - 1][k - 1] = as_scalar(v)
        return cls(n, c, label, dict(params or {}))

    @classmethod
    def zero(cls, n: int, label: str = "") -> "Algebra":
        return cls.from_products(n, {}, label or f"zero{n}")

    @property
    def products(self) -> dict:
        """Sparse view ``{(i, j): [(k, coeff), ...]}`` with 0-based indices."""
        return self._products

    def product(self, i: int, j: int) -> list:
        """Coordinates of e_{i+1} e_{j+1} (0-based indices)."""
        return list(self.c[i][j])

    def nonzero_products(self) -> list[tuple[int, int, list]]:
        """Sorted 1-based ``(i, j, [(k, coeff)])`` triples."""
        return [(i + 1, j + 1, [(k + 1, x) for k, x in nz])
                for (i, j), nz in sorted(self._products.items())]

    def same_tensor(self, other: "Algebra") -> bool:
        return self.n == other.n and self.c == other.c

    def __repr__(self):
        return f"Algebra({self.label or '?'}, n={self.n})"


def basis_vector(n: int, i: int) -> list:
    """e_{i+1} as a coordinate list."""
    v = [ZERO] * n
    v[i] = Scalar(1)
    return v


def multiply(a: Algebra, x, y) -> list:
    n = a.n
    if len(x) != n or len(y) != n:
        raise linalg.DimensionMismatch(f"elements must have {n} coordinates")
    out = [ZERO] * n
    for (i, j), nz in a.products.items():
        xi = x[i]
        if not xi:
            continue
        yj = y[j]
        if not yj:
            continue
        f = xi * yj
        for k, cval in nz:
            out[k] = out[k] + f * cval
    return out


def _product_span(a: Algebra, u: list, v: list) -> list:
    return [multiply(a, x, y) for x in u for y in v]


def power_chain(a: Algebra) -> tuple[list[int], float | int, list[list]]:
    """Dimensions of A^1, A^2, ... up to the first zero or stabilisation.

    A^{i+1} is the span of all products A^k A^{i+1-k}, k = 1..i.  Returns
    ``(dims, nilindex, bases)``; nilindex is ``math.inf`` when the chain
    stabilises at a nonzero subspace.
    """
    n = a.n
    powers = [linalg.row_space([basis_vector(n, i) for i in range(n)], n)]
    dims = [n]
    for i in range(1, n + 1):
        gens = []
        for k in range(1, i + 1):
            gens.extend(_product_span(a, powers[k - 1], powers[i - k]))
        nxt = linalg.row_space(gens, n)
        if not nxt:
            return dims, i + 1, powers
        if len(nxt) == dims[-1]:
            return dims, math.inf, powers
        powers.append(nxt)
        dims.append(len(nxt))
    return dims, math.inf, powers


def power_bases(a: Algebra) -> list[list]:
    """Echelon bases of the nonzero powers A^1, A^2, ..."""
    return power_chain(a)[2]


def chi(a: Algebra) -> tuple[int, ...]:
    dims, nil, _ = power_chain(a)
    if nil == math.inf:
        raise NotNilpotent(a.label or "algebra")
    return tuple(dims + [0] * (a.n - len(dims)))[: a.n]


def nilindex(a: Algebra):
    return power_chain(a)[1]


def is_null_filiform(a: Algebra) -> bool:
    dims, nil, _ = power_chain(a)
    return nil != math.inf and dims == [a.n + 1 - i for i in range(1, a.n + 1)]


def is_filiform(a: Algebra) -> bool:
    dims, nil, _ = power_chain(a)
    if nil == math.inf:
        return False
    full = dims + [0] * (a.n + 1)
    return all(full[i - 1] == a.n - i for i in range(2, a.n + 1))


def is_quasi_filiform(a: Algebra) -> bool:
    """A^{n-2} != 0 and A^{n-1} = 0 (power conditions only)."""
    dims, nil, _ = power_chain(a)
    if nil == math.inf or a.n < 3:
        return False
    return nil == a.n - 1


def classify_shape(a: Algebra) -> str:
    if nilindex(a) == math.inf:
        raise NotNilpotent(a.label or "algebra")
    if is_null_filiform(a):
        return "null-filiform"
    if is_filiform(a):
        return "filiform"
    if is_quasi_filiform(a):
        return "quasi-filiform"
    return "other"


def check_associativity(a: Algebra) -> list[tuple[int, int, int, list]]:
    """Violating 1-based triples (i, j, k) with defect (e_i e_j) e_k - e_i (e_j e_k)."""
    n = a.n
    es = [basis_vector(n, i) for i in range(n)]
    out = []
    for i in range(n):
        for j in range(n):
            ij = multiply(a, es[i], es[j])
            for k in range(n):
                left = multiply(a, ij, es[k])
                right = multiply(a, es[i], multiply(a, es[j], es[k]))
                defect = [x - y for x, y in zip(left, right)]
                if any(defect):
                    out.append((i + 1, j + 1, k + 1, defect))
    return out
