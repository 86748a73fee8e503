"""2-local derivations: pairwise interpolation by derivations.

A (not necessarily linear) map nabla is 2-local when for every pair x, y some
derivation D agrees with nabla at both points.  The engine builds the
non-additive maps nabla(x) = f(x_s, x_t) e_t with f(z1, z2) = z1^2 / z2
(0 when z2 = 0), checks 2-locality on seeded samples, and exhibits
non-additivity.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import linalg
from .algebra import Algebra, basis_vector
from .derivations import DerivationSpace, apply, derivation_space, evaluation_map, is_derivation
from .scalar import ONE, ZERO, Scalar, random_scalar

__all__ = [
    "TwoLocalMap",
    "default_indices",
    "f_value",
    "nabla_eval",
    "solve_pair",
    "TwoLocalReport",
    "check_two_local",
    "sample_rng",
    "additivity_witness",
    "RigidityVerdict",
    "rigidity_check",
]


def f_value(z1: Scalar, z2: Scalar) -> Scalar:
    return z1 * z1 / z2 if z2 else ZERO


def default_indices(n: int) -> tuple[int, int]:
    """1-based (s, t) used by the f-construction."""
    return (1, 3) if n == 3 else (1, n)


@dataclass(frozen=True)
class TwoLocalMap:
    """Either a derivation matrix or the f-construction on indices (s, t), 1-based."""

    ambient: Algebra
    kind: str  # "derivation" | "f"
    derivation: tuple | None = None
    s: int = 1
    t: int = 1

    @classmethod
    def from_derivation(cls, a: Algebra, d) -> "TwoLocalMap":
        return cls(a, "derivation", derivation=tuple(tuple(r) for r in d))

    @classmethod
    def f_construction(cls, a: Algebra, s: int | None = None, t: int | None = None) -> "TwoLocalMap":
        ds, dt = default_indices(a.n)
        s = ds if s is None else s
        t = dt if t is None else t
        if not (1 <= s <= a.n and 1 <= t <= a.n):
            raise IndexError(f"indices ({s}, {t}) out of range for dimension {a.n}")
        return cls(a, "f", s=s, t=t)

    def __call__(self, x) -> list:
        return nabla_eval(self, x)

    def describe(self) -> str:
        if self.kind == "derivation":
            return "derivation"
        return f"f(x{self.s}, x{self.t}) e{self.t}"


def nabla_eval(m: TwoLocalMap, x) -> list:
    n = m.ambient.n
    if len(x) != n:
        raise linalg.DimensionMismatch(f"element must have {n} coordinates")
    if m.kind == "derivation":
        return apply([list(r) for r in m.derivation], x)
    out = [ZERO] * n
    out[m.t - 1] = f_value(x[m.s - 1], x[m.t - 1])
    return out


def solve_pair(s: DerivationSpace, x, y, vx, vy) -> list | None:
    """Coordinates alpha with D(x) = vx and D(y) = vy, or None when unsolvable."""
    if s.dim == 0:
        return [] if not any(vx) and not any(vy) else None
    stacked = evaluation_map(s, x) + evaluation_map(s, y)
    return linalg.solve(stacked, list(vx) + list(vy))


@dataclass
class TwoLocalReport:
    tested: int = 0
    solvable: int = 0
    degenerate_tested: int = 0
    failing: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.tested > 0 and self.solvable == self.tested


def sample_rng(seed: int, stream: str, index: int) -> random.Random:
    """Independent generator for one sample, so results do not depend on ordering."""
    return random.Random(f"{seed}:{stream}:{index}")


def _degenerate_pair(m: TwoLocalMap, rng: random.Random):
    """A pair with x_s y_t - x_t y_s = 0 (parallel in the (s, t) plane)."""
    n = m.ambient.n
    s, t = (m.s, m.t) if m.kind == "f" else default_indices(n)
    x = [random_scalar(rng) for _ in range(n)]
    y = [random_scalar(rng) for _ in range(n)]
    k = random_scalar(rng)
    y[s - 1] = k * x[s - 1]
    y[t - 1] = k * x[t - 1]
    return x, y


def check_two_local(m: TwoLocalMap, s: DerivationSpace | None = None, samples: int = 1000,
                    seed: int = 0, degenerate: int = 50, verify: bool = True) -> TwoLocalReport:
    """Seeded pairwise interpolation test (sampling, not a proof).

    Every solvable pair is re-checked: the reconstructed D is a derivation
    and interpolates both values exactly.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    a = m.ambient
    s = s if s is not None else derivation_space(a)
    n = a.n
    rep = TwoLocalReport()

    def run(x, y, tag):
        vx, vy = m(x), m(y)
        rep.tested += 1
        alpha = solve_pair(s, x, y, vx, vy)
        if alpha is None:
            rep.failing.append({"x": x, "y": y, "kind": tag})
            return
        if verify:
            d = s.from_coords(alpha)
            ok = apply(d, x) == vx and apply(d, y) == vy and is_derivation(d, a)[0]
            if not ok:  # pragma: no cover - would indicate an arithmetic bug
                rep.failing.append({"x": x, "y": y, "kind": tag + ":reconstruction"})
                return
        rep.solvable += 1

    for i in range(samples):
        rng = sample_rng(seed, "pair", i)
        x = [random_scalar(rng) for _ in range(n)]
        y = [random_scalar(rng) for _ in range(n)]
        run(x, y, "random")
    for i in range(degenerate):
        x, y = _degenerate_pair(m, sample_rng(seed, "pencil", i))
        rep.degenerate_tested += 1
        run(x, y, "degenerate")
    return rep


_GRID = (ZERO, ONE, -ONE, Scalar(2))


def additivity_witness(m: TwoLocalMap, seed: int = 0, random_tries: int = 200):
    """(x, y, nabla(x), nabla(y), nabla(x+y)) with nabla(x+y) != nabla(x)+nabla(y), or None.

    Searches a small grid supported on e_s and e_t first, then random points.
    """
    n = m.ambient.n
    s, t = (m.s, m.t) if m.kind == "f" else default_indices(n)

    def test(x, y):
        xy = [p + q for p, q in zip(x, y)]
        vx, vy, vxy = m(x), m(y), m(xy)
        if vxy != [p + q for p, q in zip(vx, vy)]:
            return {"x": x, "y": y, "nabla_x": vx, "nabla_y": vy, "nabla_x_plus_y": vxy}
        return None

    def point(cs, ct):
        v = [ZERO] * n
        v[s - 1] = v[s - 1] + cs
        v[t - 1] = v[t - 1] + ct
        return v

    for a1, a2, b1, b2 in itertools.product(_GRID, repeat=4):
        w = test(point(a1, a2), point(b1, b2))
        if w is not None:
            return w
    rng = random.Random(seed)
    for _ in range(random_tries):
        w = test([random_scalar(rng) for _ in range(n)], [random_scalar(rng) for _ in range(n)])
        if w is not None:
            return w
    return None


@dataclass
class RigidityVerdict:
    rigid: bool
    generator: int
    rank: int
    der_dim: int
    kernel: list  # derivation matrices vanishing at e_g

    @property
    def status(self) -> str:
        return "rigid" if self.rigid else "non-rigid"


def rigidity_check(a: Algebra, g: int = 1, s: DerivationSpace | None = None) -> RigidityVerdict:
    """Is a derivation determined by its value at e_g (g is 1-based)?"""
    if not 1 <= g <= a.n:
        raise IndexError(f"generator index {g} out of range for dimension {a.n}")
    s = s if s is not None else derivation_space(a)
    if s.dim == 0:
        return RigidityVerdict(True, g, 0, 0, [])
    ev = evaluation_map(s, basis_vector(a.n, g - 1))
    ker = linalg.nullspace(ev, s.dim)
    return RigidityVerdict(not ker, g, s.dim - len(ker), s.dim, [s.from_coords(c) for c in ker])
