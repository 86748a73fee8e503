"""Sparse multivariate polynomials over Q(i) and fraction-free rank."""
from __future__ import annotations

from typing import Sequence

from gmpy2 import mpq

from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Poly", "NotExact", "poly_rank", "poly_rank_mod", "eval_matrix", "substitute_zero", "factor",
]


class NotExact(ArithmeticError):
    pass


def _order_key(exps):
    # graded lexicographic: total degree first, then lex on exponents
    return (sum(exps), exps)


class Poly:
    """Polynomial in ``nvars`` indeterminates x1..xn.

    ``terms`` maps exponent tuples to nonzero Scalar coefficients.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, nvars, terms):
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        c = as_scalar(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, k: int, coeff=ONE) -> "Poly":
        """coeff * x_{k+1} (k is 0-based)."""
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): as_scalar(coeff)})

    @classmethod
    def linear(cls, coeffs: Sequence[Scalar]) -> "Poly":
        """sum_k coeffs[k] * x_{k+1}."""
        n = len(coeffs)
        terms = {}
        for k, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[k] = 1
                terms[tuple(e)] = c
        return cls._raw(n, terms)

    # -- predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self):
        e = max(self.terms, key=_order_key)
        return e, self.terms[e]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        other = as_scalar(other)
        return self == Poly.constant(self.nvars, other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials over different variable sets")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e)
            if v is None:
                terms[e] = c
            else:
                v = v + c
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return Poly._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_scalar(other)
            if not c:
                return Poly._raw(self.nvars, {})
            return Poly._raw(self.nvars, {e: a * c for e, a in self.terms.items()})
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e)
                terms[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw(self.nvars, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly.constant(self.nvars, ONE)
        for _ in range(k):
            result = result * self
        return result

    def exact_div(self, d: "Poly") -> "Poly":
        """Quotient q with self = q * d; raises NotExact otherwise."""
        if not d:
            raise ZeroDivisionError("polynomial division by zero")
        if d.is_constant():
            inv = next(iter(d.terms.values())).inv()
            return self * inv
        de, dc = d.leading()
        dinv = dc.inv()
        rem = dict(self.terms)
        q: dict = {}
        dterms = list(d.terms.items())
        while rem:
            re_ = max(rem, key=_order_key)
            rc = rem[re_]
            t = tuple(a - b for a, b in zip(re_, de))
            if any(x < 0 for x in t):
                raise NotExact("remainder term not divisible by leading term")
            tc = rc * dinv
            q[t] = tc
            for e, c in dterms:
                m = tuple(a + b for a, b in zip(t, e))
                v = rem.get(m, ZERO) - tc * c
                if v:
                    rem[m] = v
                else:
                    rem.pop(m, None)
        return Poly._raw(self.nvars, q)

    def remainder(self, f: "Poly") -> "Poly":
        """Normal form modulo the principal ideal (f), graded-lex order."""
        if not f:
            raise ZeroDivisionError("reduction modulo zero")
        fe, fc = f.leading()
        finv = fc.inv()
        ftail = [(e, c) for e, c in f.terms.items() if e != fe]
        rem = dict(self.terms)
        out: dict = {}
        while rem:
            e = max(rem, key=_order_key)
            c = rem.pop(e)
            t = tuple(a - b for a, b in zip(e, fe))
            if any(x < 0 for x in t):
                out[e] = c
                continue
            q = c * finv
            for e2, c2 in ftail:
                m = tuple(a + b for a, b in zip(t, e2))
                v = rem.get(m, ZERO) - q * c2
                if v:
                    rem[m] = v
                else:
                    rem.pop(m, None)
        return Poly._raw(self.nvars, out)

    # -- evaluation -------------------------------------------------------
    def __call__(self, point: Sequence[Scalar]) -> Scalar:
        return self.evaluate(point)

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        point = [as_scalar(p) for p in point]
        acc = ZERO
        powers: dict = {}
        for e, c in self.terms.items():
            t = c
            for k, a in enumerate(e):
                if a:
                    key = (k, a)
                    pw = powers.get(key)
                    if pw is None:
                        pw = powers[key] = point[k] ** a
                    t = t * pw
            acc = acc + t
        return acc

    def substitute_zero(self, indices) -> "Poly":
        """Set x_{k+1} = 0 for k in ``indices`` (0-based)."""
        idx = tuple(indices)
        return Poly._raw(self.nvars, {e: c for e, c in self.terms.items()
                                      if not any(e[k] for k in idx)})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_order_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"x{k + 1}" + (f"^{a}" if a > 1 else "")
                            for k, a in enumerate(e) if a)
            cs = str(c)
            if not c.is_real and c.re:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def eval_matrix(m, point) -> list:
    return [[p.evaluate(point) for p in row] for row in m]


def substitute_zero(m, indices) -> list:
    return [[p.substitute_zero(indices) for p in row] for row in m]


def poly_rank(m, pivot_cols: int | None = None, *, return_work: bool = False):
    """Rank of a polynomial matrix over the field of rational functions.

    Fraction-free (Bareiss) elimination.  The pivot at each step is a
    nonzero entry of lowest total degree, ties broken by row-major position.
    If ``pivot_cols`` is given only the first ``pivot_cols`` columns may hold
    pivots; the remaining columns are carried along, so the returned rank is
    the rank of that leading block.  With ``return_work`` the result is
    ``(rank, rows, pivot)``: the eliminated rows (residual rows last) and the
    final pivot, which is a nonzero rank-sized minor of the input.
    """
    rows = [list(r) for r in m]
    if not rows or not rows[0]:
        return (0, rows, None) if return_work else 0
    nr, nc = len(rows), len(rows[0])
    limit = nc if pivot_cols is None else pivot_cols
    nvars = None
    for r in rows:
        for p in r:
            nvars = p.nvars
            break
        break
    one = prev = Poly.constant(nvars, ONE)
    col_order = list(range(nc))
    k = 0
    while k < min(nr, limit):
        best = None
        for i in range(k, nr):
            row = rows[i]
            for jj in range(k, limit):
                p = row[col_order[jj]]
                if p:
                    key = (p.degree(), len(p.terms), i, jj)
                    if best is None or key < best[0]:
                        best = (key, i, jj)
        if best is None:
            break
        _, pi, pj = best
        rows[k], rows[pi] = rows[pi], rows[k]
        col_order[k], col_order[pj] = col_order[pj], col_order[k]
        pivot_row = rows[k]
        pc = col_order[k]
        piv = pivot_row[pc]
        rest = [col_order[j] for j in range(k + 1, limit)] + list(range(limit, nc))
        for i in range(k + 1, nr):
            row = rows[i]
            a = row[pc]
            new = list(row)
            for j in rest:
                x = row[j]
                y = pivot_row[j]
                if a and y:
                    v = piv * x - a * y if x else -(a * y)
                elif x:
                    v = piv * x
                else:
                    continue
                new[j] = v.exact_div(prev) if v else v
            new[pc] = Poly._raw(nvars, {})
            rows[i] = new
        prev = piv
        k += 1
    if return_work:
        return k, rows, (prev if k else one)
    return k


def poly_rank_mod(m, f: Poly, pivot_cols: int | None = None, *, return_work: bool = False):
    """Rank over the fraction field of Q(i)[x]/(f) for an irreducible ``f``.

    Plain cross-multiplication elimination (the quotient ring is a domain,
    so a nonzero pivot never annihilates a row); every entry is kept in
    normal form modulo ``f``.  ``pivot_cols`` and ``return_work`` behave as in
    :func:`poly_rank`.
    """
    rows = [[p.remainder(f) for p in r] for r in m]
    if not rows or not rows[0]:
        return (0, rows) if return_work else 0
    nr, nc = len(rows), len(rows[0])
    limit = nc if pivot_cols is None else pivot_cols
    k = 0
    while k < min(nr, limit):
        best = None
        for i in range(k, nr):
            for j in range(limit):
                p = rows[i][j]
                if p:
                    key = (p.degree(), len(p.terms), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, pi, pc = best
        rows[k], rows[pi] = rows[pi], rows[k]
        prow = rows[k]
        piv = prow[pc]
        for i in range(k + 1, nr):
            row = rows[i]
            a = row[pc]
            if not a:
                continue
            rows[i] = [(piv * x - a * y).remainder(f) if (x or y) else x
                       for x, y in zip(row, prow)]
        k += 1
    if return_work:
        return k, rows
    return k


# -- factorisation (delegated to sympy) -----------------------------------

def _to_sympy(p: Poly, syms):
    import sympy as sp

    expr = sp.Integer(0)
    for e, c in p.terms.items():
        coeff = sp.Rational(int(c.re.numerator), int(c.re.denominator))
        if c.im:
            coeff += sp.I * sp.Rational(int(c.im.numerator), int(c.im.denominator))
        mono = sp.Integer(1)
        for k, a in enumerate(e):
            if a:
                mono *= syms[k] ** a
        expr += coeff * mono
    return expr


def _from_sympy_number(z) -> Scalar:
    import sympy as sp

    re_, im_ = sp.nsimplify(sp.re(z)), sp.nsimplify(sp.im(z))
    return Scalar(mpq(int(re_.p), int(re_.q)), mpq(int(im_.p), int(im_.q)))


def factor(p: Poly) -> list[tuple[Poly, int]]:
    """Irreducible factors over Q(i) with multiplicities (constant dropped)."""
    import sympy as sp

    if p.is_constant():
        return []
    n = p.nvars
    syms = sp.symbols(f"y0:{n}")
    _, facs = sp.factor_list(_to_sympy(p, syms), *syms, gaussian=True)
    out = []
    for f, mult in facs:
        sp_poly = sp.Poly(f, *syms, extension=sp.I)
        terms = {tuple(m): _from_sympy_number(c) for m, c in sp_poly.terms()}
        out.append((Poly(n, terms), int(mult)))
    return out
