"""Local derivations.

A linear map Delta is local when Delta(x) lies in the image of the evaluation
map ev_x : Der(A) -> A for every x.  That condition is linear in Delta, so the
local derivations form a subspace.  It is approximated from above by imposing
the condition at finitely many points, then certified on a tree of linear
loci:

* on a locus L with generic evaluation rank r, the residual rows of a
  fraction-free elimination of [E | I] give polynomial vectors W with
  W E = 0; Delta passes on the rank-r part of L iff W (Delta x) == 0
  identically (the condition is closed on the constant-rank set, which is
  dense in L);
* the points of L where the rank drops lie on the zero set of every r-minor,
  so each linear factor of one r-minor gives a child hyperplane, explored
  recursively;
* coordinate zero patterns chosen by the strata policy are explored as
  additional roots, covering lower-dimensional coordinate components;
* an irreducible factor f of higher degree (one that does not split over
  Q(i)) is handled by the same left-kernel test over the domain
  Q(i)[y]/(f); such components may carry no rational points besides 0, so a
  failure there is imposed as a symbolic constraint instead of a witness.

Non-coordinate rank-drop components of codimension >= 2, and further rank
drops inside nonlinear components, are outside the tree; they are reported
rather than silently assumed.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import linalg
from .algebra import Algebra, basis_vector
from .derivations import (
    DerivationSpace,
    apply,
    derivation_space,
    evaluation_map,
    unvec,
    vec,
)
from .linalg import Echelon
from .poly import Poly, factor, poly_rank, poly_rank_mod
from .scalar import ONE, ZERO, format_scalar, random_scalar

__all__ = [
    "Locus",
    "coordinate_locus",
    "strata_for",
    "LocusKernel",
    "ComponentKernel",
    "Stratification",
    "stratify",
    "StratumCheck",
    "Verdict",
    "LocalDerivationSpace",
    "locder_constraints_at",
    "locder_space",
    "verify_local",
    "solve_witness",
    "certificate_at",
]

FULL_POLICY_MAX_N = 8
WITNESS_SAMPLES = 200
MAX_LOCI = 4000


# -- loci -----------------------------------------------------------------

def _linear_form(coeffs) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        v = f"x{k + 1}"
        if c == ONE:
            parts.append(v)
        elif c == -ONE:
            parts.append("-" + v)
        elif c.is_real or not c.re:
            parts.append(f"{format_scalar(c)}*{v}")
        else:
            parts.append(f"({format_scalar(c)})*{v}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


@dataclass(frozen=True)
class Locus:
    """A linear subspace of A, stored as the RREF basis of its span."""

    n: int
    basis: tuple  # tuple of coordinate tuples

    @classmethod
    def span(cls, n: int, vectors) -> "Locus":
        rows = linalg.row_space([list(v) for v in vectors], n)
        return cls(n, tuple(tuple(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def equations(self) -> list:
        """RREF basis of the linear forms vanishing on the locus."""
        if not self.basis:
            return [basis_vector(self.n, k) for k in range(self.n)]
        return linalg.row_space(linalg.nullspace([list(b) for b in self.basis], self.n), self.n)

    @property
    def zero_coordinates(self) -> frozenset:
        return frozenset(k for k in range(self.n) if not any(b[k] for b in self.basis))

    def is_coordinate(self) -> bool:
        return len(self.zero_coordinates) + self.dim == self.n

    def describe(self) -> str:
        eqs = self.equations()
        if not eqs:
            return "generic"
        zeros = [k for k in range(self.n)
                 if any(e[k] and sum(1 for c in e if c) == 1 for e in eqs)]
        out = []
        if zeros:
            out.append(",".join(f"x{k + 1}" for k in zeros) + "=0")
        for e in eqs:
            if sum(1 for c in e if c) > 1:
                out.append(_linear_form(e) + "=0")
        return "; ".join(out)

    def point(self, y) -> list:
        x = [ZERO] * self.n
        for c, b in zip(y, self.basis):
            if c:
                for k, v in enumerate(b):
                    if v:
                        x[k] = x[k] + c * v
        return x

    def ones(self) -> list:
        return self.point([ONE] * self.dim)

    def sample(self, rng: random.Random) -> list:
        return self.point([random_scalar(rng) for _ in range(self.dim)])

    def pull_back(self, coeffs) -> list:
        """Coefficients over the locus parameters of sum_j coeffs[j] x_j."""
        return [sum((coeffs[j] * b[j] for j in range(self.n) if b[j] and coeffs[j]), ZERO)
                for b in self.basis]

    def hyperplane(self, form) -> "Locus":
        """Sub-locus where the parameter form sum_k form[k] y_k vanishes."""
        ker = linalg.nullspace([list(form)], self.dim)
        return Locus.span(self.n, [self.point(v) for v in ker])


def coordinate_locus(n: int, zero) -> Locus:
    zero = set(zero)
    return Locus.span(n, [basis_vector(n, k) for k in range(n) if k not in zero])


def resolve_policy(n: int, policy: str) -> str:
    if policy == "auto":
        return "full" if n <= FULL_POLICY_MAX_N else "prefix"
    if policy not in ("full", "prefix", "custom"):
        raise ValueError(f"unknown strata policy {policy!r}")
    return policy


def _locus_order(loc: Locus):
    return (loc.dim, tuple(tuple((c.re, c.im) for c in b) for b in loc.basis))


def strata_for(n: int, policy: str = "auto", custom=None) -> list[Locus]:
    """Coordinate strata used as roots, fewest free coordinates first.

    ``full``: every zero pattern except x = 0.  ``prefix``: x1 = ... = x_{t-1} = 0,
    t = 1..n (t = 1 is the whole space).  ``auto``: full for n <= 8, prefix
    otherwise.  ``custom``: iterable of 1-based index sets forced to zero.
    """
    policy = resolve_policy(n, policy)
    if policy == "full":
        zs = [z for r in range(n) for z in itertools.combinations(range(n), r)]
    elif policy == "prefix":
        zs = [tuple(range(t)) for t in range(n)]
    else:
        zs = [tuple(k - 1 for k in z) for z in (custom or [])]
        zs = [z for z in zs if len(set(z)) < n] + [()]
    loci = {coordinate_locus(n, z) for z in zs}
    return sorted(loci, key=_locus_order)


# -- point constraints ----------------------------------------------------

def locder_constraints_at(s: DerivationSpace, x) -> list[list]:
    """Rows over vec(Delta) expressing Delta(x) in Im(ev_x).

    For each w in the left nullspace of ev_x the row is w^T (Delta x), whose
    coefficient at unknown (i, j) is w_i x_j.
    """
    n = s.n
    if not any(x):
        return []
    ev = evaluation_map(s, x)
    if s.dim == 0:
        left = [basis_vector(n, i) for i in range(n)]
    else:
        left = linalg.left_nullspace(ev)
    rows = []
    for w in left:
        row = [ZERO] * (n * n)
        for i, wi in enumerate(w):
            if not wi:
                continue
            for j, xj in enumerate(x):
                if xj:
                    row[i * n + j] = wi * xj
        rows.append(row)
    return rows


def solve_witness(s: DerivationSpace, delta, x) -> list | None:
    """Coordinates alpha of a derivation D with D(x) = Delta(x), or None."""
    if s.dim == 0:
        return [] if not any(apply(delta, x)) else None
    return linalg.solve(evaluation_map(s, x), apply(delta, x))


def certificate_at(s: DerivationSpace, delta, x) -> dict:
    """Unsolvable system ev_x alpha = Delta(x) plus a separating functional.

    ``functional`` is w with w^T ev_x = 0 and w^T Delta(x) != 0, which proves
    that no derivation agrees with Delta at x.
    """
    ev = evaluation_map(s, x)
    rhs = apply(delta, x)
    left = linalg.left_nullspace(ev) if s.dim else [basis_vector(s.n, i) for i in range(s.n)]
    sep = next(w for w in left if sum((a * b for a, b in zip(w, rhs)), ZERO))
    return {
        "point": list(x),
        "matrix": ev,
        "rhs": rhs,
        "functional": sep,
        "functional_on_rhs": sum((a * b for a, b in zip(sep, rhs)), ZERO),
    }


# -- stratification -------------------------------------------------------

def _restricted_evaluation(s: DerivationSpace, loc: Locus) -> list:
    """E(x) on the locus: n x dim(Der) linear forms in the locus parameters."""
    return [[Poly.linear(loc.pull_back(b[i])) for b in s.basis] for i in range(s.n)]


def _restricted_image(delta, loc: Locus) -> list:
    return [Poly.linear(loc.pull_back(row)) for row in delta]


@dataclass
class LocusKernel:
    locus: Locus
    rank: int
    left: list  # polynomial row vectors w with w E = 0 on the locus
    minor: Poly | None
    nonlinear: list = field(default_factory=list)  # nonlinear factors of the minor

    def passes(self, delta) -> bool:
        """True iff w . Delta(x) vanishes identically on the locus for every w."""
        if not self.left:
            return True
        dx = _restricted_image(delta, self.locus)
        return not any(_combine(w, dx) for w in self.left)


def _combine(w, dx):
    acc = None
    for wi, p in zip(w, dx):
        if wi and p:
            t = wi * p
            acc = t if acc is None else acc + t
    return acc


@dataclass
class ComponentKernel:
    """Irreducible hypersurface f = 0 inside a locus (parameters of the locus)."""

    locus: Locus
    f: Poly
    rank: int
    left: list  # w with w E == 0 modulo f

    def describe(self) -> str:
        return f"{self.locus.describe()}; {self.f}=0 (in locus parameters)"

    def residuals(self, delta) -> list:
        dx = _restricted_image(delta, self.locus)
        out = []
        for w in self.left:
            acc = _combine(w, dx)
            if acc:
                acc = acc.remainder(self.f)
            if acc:
                out.append(acc)
        return out

    def passes(self, delta) -> bool:
        return not self.residuals(delta)

    def constraint_rows(self) -> list[list]:
        """Linear rows over vec(Delta) equivalent to passing on this component."""
        n, m = self.locus.n, self.locus.dim
        xs = [Poly.linear([b[j] for b in self.locus.basis]) for j in range(n)]
        rows: dict = {}
        for w_idx, w in enumerate(self.left):
            for i, wi in enumerate(w):
                if not wi:
                    continue
                for j in range(n):
                    if not xs[j]:
                        continue
                    p = (wi * xs[j]).remainder(self.f)
                    for mono, c in p.terms.items():
                        row = rows.setdefault((w_idx, mono), [ZERO] * (n * n))
                        row[i * n + j] = row[i * n + j] + c
        return [r for r in rows.values() if any(r)]


def _component(s: DerivationSpace, loc: Locus, f: Poly) -> ComponentKernel:
    n, m, d = s.n, loc.dim, s.dim
    ident = [[Poly.constant(m, ONE) if k == i else Poly(m) for k in range(n)] for i in range(n)]
    e = _restricted_evaluation(s, loc)
    aug = [row + ident[i] for i, row in enumerate(e)]
    r, work = poly_rank_mod(aug, f, pivot_cols=d, return_work=True)
    return ComponentKernel(loc, f, r, [row[d:] for row in work[r:]])


def _analyse(s: DerivationSpace, loc: Locus) -> tuple[LocusKernel, list[Locus]]:
    n, m, d = s.n, loc.dim, s.dim
    ident = [[Poly.constant(m, ONE) if k == i else Poly(m) for k in range(n)] for i in range(n)]
    if d == 0:
        return LocusKernel(loc, 0, ident, None), []
    e = _restricted_evaluation(s, loc)
    aug = [row + ident[i] for i, row in enumerate(e)]
    r, work, minor = poly_rank(aug, pivot_cols=d, return_work=True)
    left = [row[d:] for row in work[r:]]
    children, nonlinear = [], []
    if r and not minor.is_constant():
        for f, _ in factor(minor):
            if all(sum(ex) == 1 for ex in f.terms):
                form = [ZERO] * m
                for ex, c in f.terms.items():
                    form[ex.index(1)] = c
                children.append(loc.hyperplane(form))
            else:
                nonlinear.append(f)
    return LocusKernel(loc, r, left, minor, nonlinear), children


@dataclass
class Stratification:
    policy: str
    kernels: list  # LocusKernel, smallest loci first
    components: list = field(default_factory=list)  # ComponentKernel
    truncated: bool = False

    @property
    def loci(self) -> list[Locus]:
        return [k.locus for k in self.kernels]

    def nonlinear_components(self) -> list[str]:
        return [c.describe() for c in self.components]

    def uncovered(self) -> str:
        notes = []
        if self.policy == "prefix":
            notes.append("coordinate zero patterns other than x1=...=x_{t-1}=0 unless reached "
                         "as rank-drop hyperplanes")
        elif self.policy == "custom":
            notes.append("coordinate zero patterns outside the custom list unless reached as "
                         "rank-drop hyperplanes")
        notes.append("non-coordinate rank-drop components of codimension >= 2")
        if self.components:
            notes.append("further rank drops inside the nonlinear components checked")
        if self.truncated:
            notes.append(f"loci beyond the first {MAX_LOCI}")
        return "; ".join(notes)


def stratify(s: DerivationSpace, policy: str = "auto", custom=None) -> Stratification:
    """Explore the tree of loci for the evaluation map of ``s``."""
    n = s.n
    pol = resolve_policy(n, policy)
    queue = list(strata_for(n, pol, custom))
    seen = set(queue)
    kernels = []
    truncated = False
    while queue:
        if len(kernels) >= MAX_LOCI:
            truncated = True
            break
        loc = queue.pop()
        k, children = _analyse(s, loc)
        kernels.append(k)
        for c in children:
            if c.dim and c not in seen:
                seen.add(c)
                queue.append(c)
    kernels.sort(key=lambda k: _locus_order(k.locus))
    comps = {}
    for k in kernels:
        for f in k.nonlinear:
            key = (k.locus, f)
            if key not in comps:
                comps[key] = _component(s, k.locus, f)
    return Stratification(pol, kernels, list(comps.values()), truncated)


# -- verification of a single map ---------------------------------------------

@dataclass
class StratumCheck:
    stratum: str
    rank_e: int
    rank_aug: int
    verified: bool


@dataclass
class Verdict:
    status: str  # verified | refuted | inconclusive
    checks: list = field(default_factory=list)
    witness: list | None = None
    certificate: dict | None = None
    uncovered: str = ""
    degenerate: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.status == "verified"


def _find_witness(s: DerivationSpace, delta, loc: Locus, rng: random.Random) -> list | None:
    """Exact point of ``loc`` where Delta(x) is outside Im(ev_x).

    Tries the all-ones parameter point, then random points; failing that,
    the sub-loci spanned by all but one or two basis vectors.
    """
    def scan(target: Locus, samples: int):
        cands = [target.ones()] + [target.sample(rng) for _ in range(samples - 1)]
        for x in cands:
            if any(x) and solve_witness(s, delta, x) is None:
                return x
        return None

    x = scan(loc, WITNESS_SAMPLES)
    if x is not None:
        return x
    frontier = [loc]
    for _ in range(2):
        nxt = []
        for lc in frontier:
            for k in range(lc.dim):
                sub = Locus.span(s.n, [b for t, b in enumerate(lc.basis) if t != k])
                if sub.dim:
                    x = scan(sub, 20)
                    if x is not None:
                        return x
                    nxt.append(sub)
        frontier = nxt
    return None


def verify_local(delta, a: Algebra, policy: str = "auto", *, space: DerivationSpace | None = None,
                 seed: int = 0, custom=None, strata: Stratification | None = None) -> Verdict:
    """Certify or refute that ``delta`` is a local derivation of ``a``.

    On each locus the restricted evaluation map E and E+ = [E | Delta x] are
    compared by fraction-free rank.  A rank gap is turned into an exact
    witness point by sampling inside the locus.
    """
    s = space if space is not None else derivation_space(a)
    n = a.n
    if len(delta) != n or any(len(r) != n for r in delta):
        raise linalg.DimensionMismatch(f"map must be {n}x{n}")
    rng = random.Random(seed)
    st = strata if strata is not None else stratify(s, policy, custom)
    checks, degenerate = [], []
    for k in st.kernels:
        loc = k.locus
        dx = _restricted_image(delta, loc)
        if s.dim:
            e = _restricted_evaluation(s, loc)
            r_aug = poly_rank([row + [p] for row, p in zip(e, dx)])
        else:
            r_aug = 1 if any(dx) else 0
        ok = k.rank == r_aug
        checks.append(StratumCheck(loc.describe(), k.rank, r_aug, ok))
        if not ok:
            x = _find_witness(s, delta, loc, rng)
            if x is None:
                degenerate.append(loc.describe())
                continue
            return Verdict("refuted", checks, witness=x, certificate=certificate_at(s, delta, x),
                           uncovered=st.uncovered())
    for c in st.components:
        dx = _restricted_image(delta, c.locus)
        e = _restricted_evaluation(s, c.locus)
        r_aug = poly_rank_mod([row + [p] for row, p in zip(e, dx)], c.f)
        ok = c.rank == r_aug
        checks.append(StratumCheck(c.describe(), c.rank, r_aug, ok))
        if not ok:
            cert = {"component": c.describe(), "functional": c.left,
                    "residuals": [str(p) for p in c.residuals(delta)]}
            return Verdict("refuted", checks, certificate=cert, uncovered=st.uncovered())
    status = "inconclusive" if degenerate else "verified"
    return Verdict(status, checks, uncovered=st.uncovered(), degenerate=degenerate)


# -- the space ------------------------------------------------------------

@dataclass
class LocalDerivationSpace:
    ambient: Algebra
    der: DerivationSpace
    basis: list
    status: list
    strata: Stratification
    log: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def policy(self) -> str:
        return self.strata.policy

    @property
    def all_verified(self) -> bool:
        return all(st == "verified" for st in self.status)

    def vectors(self) -> list:
        return [vec(b) for b in self.basis]

    def contains(self, m) -> bool:
        return linalg.span_contains(self.vectors(), [vec(m)], self.ambient.n ** 2)

    def from_coords(self, coords) -> list:
        return unvec(linalg.combine(coords, self.vectors()), self.ambient.n)

    def witness_points(self) -> list:
        """Points whose constraints cut the search space down (upper-bound certificate)."""
        return [entry["coords"] for entry in self.log if entry["coords"] is not None]


def locder_space(a: Algebra, seed: int = 0, rounds: int = 3, policy: str = "auto", *,
                 custom=None, max_refinements: int = 64) -> LocalDerivationSpace:
    """Space of local derivations of ``a``.

    Constraints are imposed at e_1..e_n and at seeded random points until the
    dimension survives ``rounds`` consecutive points unchanged.  The basis is
    then checked on every locus of the stratification; a failing locus yields
    a witness point whose constraints are added before re-checking.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    n = a.n
    s = derivation_space(a)
    rng = random.Random(seed)
    ech = Echelon(n * n)
    log = []

    def impose(x, tag):
        for row in locder_constraints_at(s, x):
            ech.add(row)
        log.append({"point": tag, "coords": list(x), "dim": n * n - ech.rank})

    for i in range(n):
        impose(basis_vector(n, i), f"e{i + 1}")
    stable = 0
    while stable < rounds:
        before = n * n - ech.rank
        impose([random_scalar(rng) for _ in range(n)], "random")
        stable = stable + 1 if n * n - ech.rank == before else 0

    st = stratify(s, policy, custom)
    basis: list = []
    status: list = []
    for _ in range(max_refinements):
        basis = [unvec(v, n) for v in linalg.row_space(ech.nullspace(), n * n)]
        status = ["verified"] * len(basis)
        failing = None
        for k in st.kernels:
            bad = [t for t, b in enumerate(basis) if not k.passes(b)]
            if bad:
                failing = (k.locus, bad)
                break
        if failing is None:
            comp = next((c for c in st.components if not all(c.passes(b) for b in basis)), None)
            if comp is None:
                break
            for row in comp.constraint_rows():
                ech.add(row)
            log.append({"point": f"component[{comp.describe()}]", "coords": None,
                        "dim": n * n - ech.rank})
            continue
        loc, bad = failing
        x = None
        for t in bad:
            x = _find_witness(s, basis[t], loc, rng)
            if x is not None:
                break
        if x is None:
            for t in bad:
                status[t] = "unverified"
            break
        impose(x, f"witness[{loc.describe()}]")
    return LocalDerivationSpace(a, s, basis, status, st, log)
