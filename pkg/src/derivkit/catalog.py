"""Catalogue of classified nilpotent associative algebras and the algebra file format.

Family names: ``mu0`` (null-filiform), ``mu1_1``..``mu1_4`` (filiform),
``mu2_1``..``mu2_4`` (naturally graded quasi-filiform), ``A1``..``A5``
(dimension 3), ``lam1``..``lam6`` (dimension 5, chi = (5,2,1,0,0)) and
``m1``..``m22`` (dimension 5, chi = (5,3,1,0,0)).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import yaml

from .algebra import Algebra
from .scalar import I, ONE, Scalar, as_scalar, format_scalar, parse_scalar

__all__ = [
    "CatalogError",
    "UnknownFamily",
    "DimensionOutOfRange",
    "MissingOrForbiddenParameter",
    "SchemaError",
    "IndexOutOfRange",
    "DuplicateProductEntry",
    "Family",
    "FAMILIES",
    "build",
    "list_families",
    "parse_algebra",
    "load_algebra",
    "dump_algebra",
    "format_combination",
    "parse_combination",
]


class CatalogError(ValueError):
    pass


class UnknownFamily(CatalogError):
    pass


class DimensionOutOfRange(CatalogError):
    pass


class MissingOrForbiddenParameter(CatalogError):
    pass


class SchemaError(CatalogError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field


class IndexOutOfRange(SchemaError):
    pass


class DuplicateProductEntry(SchemaError):
    pass


Products = dict  # {(i, j): {k: Scalar}}, 1-based


@dataclass(frozen=True)
class Family:
    name: str
    display: str
    builder: Callable[[int, Scalar | None], Products]
    fixed_dim: int | None = None
    min_n: int = 1
    has_alpha: bool = False
    alpha_values: tuple | None = None  # allowed alpha values, None = any

    @property
    def arity(self) -> str:
        return f"n={self.fixed_dim}" if self.fixed_dim else f"n>={self.min_n}"

    @property
    def constraint(self) -> str:
        if not self.has_alpha:
            return ""
        if self.alpha_values is None:
            return "alpha in C"
        return "alpha in {" + ", ".join(format_scalar(a) for a in self.alpha_values) + "}"


def _graded(bound: int) -> Products:
    """e_i e_j = e_{i+j} for 2 <= i + j <= bound."""
    return {(i, j): {i + j: ONE} for i in range(1, bound) for j in range(1, bound) if i + j <= bound}


def _with(base: Products, *extra) -> Products:
    out = {k: dict(v) for k, v in base.items()}
    for i, j, combo in extra:
        out[(i, j)] = {k: as_scalar(c) for k, c in combo.items() if as_scalar(c)}
    return out


def _mu0(n, a):
    return _graded(n)


def _mu1(variant):
    def build(n, a):
        base = _graded(n - 1)
        extra = {
            1: [],
            2: [(n, n, {n - 1: 1})],
            3: [(1, n, {n - 1: 1})],
            4: [(1, n, {n - 1: 1}), (n, n, {n - 1: 1})],
        }[variant]
        return _with(base, *extra)
    return build


def _mu2(variant):
    def build(n, a):
        base = _graded(n - 2)
        extra = {
            1: [(n - 1, 1, {n: 1})],
            2: [(1, n - 1, {n: 1}), (n - 1, 1, {n: a})],
            3: [(n - 1, n - 1, {n: 1})],
            4: [(1, n - 1, {n: 1}), (n - 1, n - 1, {n: 1})],
        }[variant]
        return _with(base, *extra)
    return build


def _fixed(*entries):
    def build(n, a):
        return _with({}, *entries)
    return build


# e1e1 = e2, e1e2 = e2e1 = e3: shared by every five-dimensional entry
_H = [(1, 1, {2: 1}), (1, 2, {3: 1}), (2, 1, {3: 1})]


def _five(*entries):
    def build(n, a):
        return _with({}, *_H, *entries)
    return build


def _five_alpha(fn):
    def build(n, a):
        return _with({}, *_H, *fn(a))
    return build


def _m21(a):
    return [
        (1, 4, {5: 1}),
        (4, 1, {2: 1 - a, 5: a}),
        (4, 2, {3: 2}),
        (4, 4, {2: -a, 3: 1, 5: 1 + a}),
        (4, 5, {3: 1}),
        (5, 1, {3: 1 - a}),
        (5, 4, {3: -a}),
    ]


def _m22(a):
    return [
        (1, 4, {5: 1}),
        (4, 1, {2: 1 - a, 5: a}),
        (4, 2, {3: 1 - a * a}),
        (4, 4, {2: -a, 5: 1 + a}),
        (4, 5, {3: -(a * a)}),
        (5, 1, {3: 1 - a}),
        (5, 4, {3: -a}),
    ]


def _families() -> list[Family]:
    fams = [Family("mu0", "mu_0^n", _mu0, min_n=1)]
    for v in range(1, 5):
        fams.append(Family(f"mu1_{v}", f"mu_{{1,{v}}}^n", _mu1(v), min_n=4))
    for v in range(1, 5):
        fams.append(Family(f"mu2_{v}", f"mu_{{2,{v}}}^n" + ("(alpha)" if v == 2 else ""),
                           _mu2(v), min_n=6, has_alpha=(v == 2)))
    fams += [
        Family("A1", "A_1", _fixed((1, 1, {2: 1})), fixed_dim=3),
        Family("A2", "A_2", _fixed((1, 2, {3: 1}), (2, 1, {3: 1})), fixed_dim=3),
        Family("A3", "A_3", _fixed((1, 2, {3: 1}), (2, 1, {3: -1})), fixed_dim=3),
        Family("A4", "A_4^alpha",
               lambda n, a: _with({}, (1, 1, {3: 1}), (2, 2, {3: a}), (1, 2, {3: 1})),
               fixed_dim=3, has_alpha=True),
        Family("A5", "A_5", _fixed((1, 1, {2: 1}), (1, 2, {3: 1}), (2, 1, {3: 1})), fixed_dim=3),
    ]
    lam = {
        1: _five((4, 4, {3: 1}), (5, 5, {3: 1})),
        2: _five((1, 4, {3: 1}), (4, 5, {3: 1}), (5, 4, {3: 1})),
        3: _five((1, 4, {3: 1}), (5, 5, {3: 1})),
        4: _five((1, 4, {3: 1}), (4, 4, {3: 1}), (5, 5, {3: 1})),
        5: _five((4, 5, {3: 1}), (5, 4, {3: -1})),
    }
    for k, b in lam.items():
        fams.append(Family(f"lam{k}", f"lambda_{k}", b, fixed_dim=5))
    fams.append(Family("lam6", "lambda_6^alpha",
                       _five_alpha(lambda a: [(4, 4, {3: 1}), (4, 5, {3: 1}), (5, 5, {3: a})]),
                       fixed_dim=5, has_alpha=True))
    m = {
        1: _five((4, 1, {5: 1})),
        2: _five((4, 1, {5: 1}), (4, 4, {3: 1})),
        3: _five((4, 1, {5: 1}), (4, 2, {3: 1}), (5, 1, {3: 1})),
        4: _five((4, 1, {5: 1}), (4, 2, {3: 1}), (5, 1, {3: 1}), (4, 4, {3: 1})),
        5: _five((1, 4, {5: 1}), (4, 1, {3: 1, 5: 1})),
        6: _five((1, 4, {5: 1}), (4, 1, {3: 1, 5: 1}), (4, 4, {3: 1})),
        7: _five_alpha(lambda a: [(1, 4, {5: 1}), (4, 1, {5: a})]),
        8: _five_alpha(lambda a: [(1, 4, {5: 1}), (4, 1, {5: a}), (4, 4, {3: 1})]),
        9: _five((4, 1, {3: 1}), (4, 4, {5: 1})),
        10: _five((1, 4, {5: 1}), (4, 4, {5: 1})),
        11: _five((1, 4, {5: 1}), (4, 4, {3: 1, 5: 1})),
        12: _five((1, 4, {5: 1}), (4, 1, {2: 1, 5: -1}), (5, 1, {3: 1})),
        13: _five((1, 4, {5: 1}), (4, 1, {2: 1, 5: -1}), (4, 4, {3: 1}), (5, 1, {3: 1})),
        14: _five((1, 4, {5: 1}), (4, 1, {2: 1, 5: 1}), (4, 2, {3: 2}), (4, 4, {5: 2}),
                  (5, 1, {3: 1})),
        15: _five((1, 4, {5: 1}), (4, 1, {2: 1, 5: 1}), (4, 2, {3: 2}), (4, 4, {3: 1, 5: 2}),
                  (5, 1, {3: 1})),
        16: _five((1, 4, {5: 1}), (4, 1, {5: 1}), (4, 4, {2: 1}), (4, 5, {3: 1}), (5, 4, {3: 1})),
        17: _five((1, 4, {5: 1}), (4, 1, {3: 1, 5: 1}), (4, 4, {2: 1}), (4, 5, {3: 1}),
                  (5, 4, {3: 1})),
        18: _five((1, 4, {5: 1}), (4, 1, {5: -1}), (4, 4, {2: 1}), (5, 4, {3: 1}), (4, 5, {3: -1})),
        19: _five((1, 4, {5: 1}), (4, 1, {2: 1}), (4, 2, {3: 1}), (4, 4, {3: 1, 5: 1}),
                  (5, 1, {3: 1})),
        20: _five((1, 4, {5: 1}), (4, 1, {3: 1, 5: 1}), (4, 4, {2: -1, 5: 2}), (4, 5, {3: -1}),
                  (5, 4, {3: -1})),
    }
    for k, b in m.items():
        alpha = k in (7, 8)
        disp = f"mu_{k}" + ("^alpha" if alpha else "")
        fams.append(Family(f"m{k}", disp, b, fixed_dim=5, has_alpha=alpha))
    fams.append(Family("m21", "mu_21^alpha", _five_alpha(_m21), fixed_dim=5, has_alpha=True,
                       alpha_values=(I, -I)))
    fams.append(Family("m22", "mu_22^alpha", _five_alpha(_m22), fixed_dim=5, has_alpha=True))
    return fams


FAMILIES: dict[str, Family] = {f.name: f for f in _families()}


def list_families() -> list[tuple[str, str, str]]:
    """``(family, arity, parameter constraint)`` in catalogue order."""
    return [(f.name, f.arity, f.constraint) for f in FAMILIES.values()]


def family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnknownFamily(f"unknown family {name!r}") from None


def algebra_label(name: str, n: int | None, alpha) -> str:
    fam = family(name)
    label = name if fam.fixed_dim else f"{name}[n={n}]"
    if fam.has_alpha:
        label += f"[alpha={format_scalar(as_scalar(alpha))}]"
    return label


def build(name: str, n: int | None = None, alpha=None) -> Algebra:
    fam = family(name)
    if fam.fixed_dim is not None:
        if n is not None and n != fam.fixed_dim:
            raise DimensionOutOfRange(f"{name} has fixed dimension {fam.fixed_dim}")
        n = fam.fixed_dim
    else:
        if n is None:
            raise DimensionOutOfRange(f"{name} needs a dimension n>={fam.min_n}")
        if n < fam.min_n:
            raise DimensionOutOfRange(f"{name} requires n>={fam.min_n}, got {n}")
    if fam.has_alpha:
        if alpha is None:
            raise MissingOrForbiddenParameter(f"{name} requires alpha ({fam.constraint})")
        alpha = as_scalar(alpha)
        if fam.alpha_values is not None and alpha not in fam.alpha_values:
            raise MissingOrForbiddenParameter(f"{name}: {fam.constraint}, got {alpha}")
    elif alpha is not None:
        raise MissingOrForbiddenParameter(f"{name} takes no alpha parameter")
    prods = fam.builder(n, alpha)
    params = {"family": name, "n": n}
    if alpha is not None:
        params["alpha"] = alpha
    return Algebra.from_products(n, prods, algebra_label(name, n, alpha), params)


# -- text format ----------------------------------------------------------

def format_combination(coords) -> str:
    parts = []
    for k, c in enumerate(coords):
        if not c:
            continue
        e = f"e{k + 1}"
        if c == ONE:
            parts.append(e)
        elif c == -ONE:
            parts.append("-" + e)
        elif c.is_real or not c.re:
            parts.append(f"{format_scalar(c)}*{e}")
        else:
            parts.append(f"({format_scalar(c)})*{e}")
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")


def _split_terms(text: str) -> list[str]:
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and not cur.rstrip().endswith(("*", "/")):
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    if cur.strip():
        terms.append(cur)
    return terms


_TERM_RE = re.compile(r"^(?P<coef>.*?)\*?e(?P<k>\d+)$")


def parse_combination(text: str, n: int) -> list:
    """Parse ``2*e3 - e4 + (1-i)*e5`` into coordinates (or ``0``)."""
    s = text.replace(" ", "")
    coords = [Scalar(0)] * n
    if s == "0":
        return coords
    if not s:
        raise ValueError("empty linear combination")
    for term in _split_terms(s):
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"malformed term {term!r}")
        k = int(m.group("k"))
        if not 1 <= k <= n:
            raise IndexError(f"basis index e{k} outside 1..{n}")
        coef = m.group("coef")
        if coef in ("", "+"):
            c = ONE
        elif coef == "-":
            c = -ONE
        else:
            sign = ONE
            if coef[0] in "+-" and coef[1:2] == "(":
                sign = -ONE if coef[0] == "-" else ONE
                coef = coef[1:]
            c = sign * parse_scalar(coef)
        coords[k - 1] = coords[k - 1] + c
    return coords


_LHS_RE = re.compile(r"^\s*e(\d+)\s*\*\s*e(\d+)\s*$")


def _node_line(node) -> int:
    return node.start_mark.line + 1


def parse_algebra(text: str) -> Algebra:
    """Parse an algebra document (YAML mapping with ``dim``, ``label``, ``products``)."""
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        line = getattr(getattr(exc, "problem_mark", None), "line", None)
        raise SchemaError(f"not a valid document: {exc}", None if line is None else line + 1) from None
    if not isinstance(root, yaml.MappingNode):
        raise SchemaError("document must be a mapping", 1 if root is None else _node_line(root))
    fields = {}
    for knode, vnode in root.value:
        key = knode.value
        if key in fields:
            raise SchemaError("duplicate field", _node_line(knode), key)
        fields[key] = vnode
    for key, node in fields.items():
        if key not in ("dim", "label", "products", "params"):
            raise SchemaError("unknown field", _node_line(node), key)
    if "dim" not in fields:
        raise SchemaError("missing required field", None, "dim")
    dnode = fields["dim"]
    try:
        n = int(dnode.value)
    except (TypeError, ValueError):
        raise SchemaError("dim must be a positive integer", _node_line(dnode), "dim") from None
    if n < 1 or not isinstance(dnode, yaml.ScalarNode):
        raise SchemaError("dim must be a positive integer", _node_line(dnode), "dim")
    label = ""
    if "label" in fields:
        label = str(fields["label"].value)
    products: dict = {}
    pnode = fields.get("products")
    if pnode is not None:
        if isinstance(pnode, yaml.ScalarNode) and pnode.value in ("", "null", "~", "[]"):
            pass
        elif not isinstance(pnode, yaml.SequenceNode):
            raise SchemaError("products must be a list", _node_line(pnode), "products")
        else:
            for item in pnode.value:
                line = _node_line(item)
                if not isinstance(item, yaml.ScalarNode) or "=" not in item.value:
                    raise SchemaError("entry must read 'ei*ej = <combination>'", line, "products")
                lhs, rhs = item.value.split("=", 1)
                m = _LHS_RE.match(lhs)
                if not m:
                    raise SchemaError(f"malformed left-hand side {lhs.strip()!r}", line, "products")
                i, j = int(m.group(1)), int(m.group(2))
                if not (1 <= i <= n and 1 <= j <= n):
                    raise IndexOutOfRange(f"e{i}*e{j} outside basis e1..e{n}", line, "products")
                if (i, j) in products:
                    raise DuplicateProductEntry(f"e{i}*e{j} given twice", line, "products")
                try:
                    coords = parse_combination(rhs, n)
                except IndexError as exc:
                    raise IndexOutOfRange(str(exc), line, "products") from None
                except (ValueError, ZeroDivisionError) as exc:
                    raise SchemaError(str(exc), line, "products") from None
                products[(i, j)] = {k + 1: c for k, c in enumerate(coords) if c}
    return Algebra.from_products(n, products, label)


def load_algebra(path) -> Algebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def product_lines(a: Algebra) -> list[str]:
    return [f"e{i}*e{j} = {format_combination(a.c[i - 1][j - 1])}"
            for i, j, _ in a.nonzero_products()]


def dump_algebra(a: Algebra) -> str:
    lines = [f"dim: {a.n}", f"label: {yaml.safe_dump(a.label).splitlines()[0]}", "products:"]
    prods = product_lines(a)
    if not prods:
        lines[-1] = "products: []"
    lines += [f"  - {p}" for p in prods]
    return "\n".join(lines) + "\n"
