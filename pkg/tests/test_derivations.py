import random

import pytest
import sympy as sp

from conftest import sympy_matrix
from oracle import derivation_basis
from derivkit import linalg
from derivkit.acceptance import catalog_instances, filiform_11_closed_form, null_filiform_closed_form
from derivkit.algebra import Algebra, basis_vector
from derivkit.catalog import build
from derivkit.derivations import (
    apply, commutator, derivation_space, evaluation_map, is_derivation, leibniz_matrix,
    leibniz_residuals, symbolic_evaluation_map, unvec, vec,
)
from derivkit.linalg import DimensionMismatch
from derivkit.poly import eval_matrix, poly_rank
from derivkit.scalar import ONE, ZERO, Scalar, random_scalar


def _sympy_span(mats, n):
    return sp.Matrix([list(m.T.reshape(1, n * n)) for m in mats]) if mats else sp.zeros(0, n * n)


@pytest.mark.parametrize("name,n,alpha", catalog_instances())
def test_der_matches_sympy_oracle(name, n, alpha):
    a = build(name, n, alpha)
    s = derivation_space(a)
    ref = derivation_basis(a)
    assert s.dim == len(ref)
    # same subspace: stacking both bases does not increase the rank
    ours = [sympy_matrix(b) for b in s.basis]
    both = _sympy_span(ours + ref, a.n)
    assert both.rank() == len(ref)


@pytest.mark.parametrize("n", range(4, 9))
def test_der_dims_of_families(n):
    assert derivation_space(build("mu0", n)).dim == n
    assert derivation_space(build("mu1_1", n)).dim == n + 2
    assert derivation_space(build("mu1_2", n)).dim == n + 1
    assert derivation_space(build("mu1_3", n)).dim == n + 1
    assert derivation_space(build("mu1_4", n)).dim == n


def test_der_examples():
    assert derivation_space(build("lam5")).dim == 8
    assert derivation_space(build("mu2_2", 6, 1)).dim == 10


@pytest.mark.parametrize("n", [7, 8])
def test_mu22_alpha1_dimension_is_n_plus_4(n):
    """Closed form 2n-2 agrees only at n=6; the independent oracle gives n+4."""
    a = build("mu2_2", n, 1)
    assert derivation_space(a).dim == len(derivation_basis(a)) == n + 4


def test_mu22_generic_has_extra_scaling():
    # D(e_{n-1}) = e_{n-1}, D(e_n) = e_n is a derivation for alpha != +-1
    n = 6
    a = build("mu2_2", n, 2)
    d = [[ZERO] * n for _ in range(n)]
    d[n - 2][n - 2] = ONE
    d[n - 1][n - 1] = ONE
    assert is_derivation(d, a)[0]
    assert derivation_space(a).dim == n + 3


@pytest.mark.parametrize("n", range(3, 9))
def test_null_filiform_closed_form(n):
    s = derivation_space(build("mu0", n))
    assert linalg.same_span(s.vectors(), [vec(m) for m in null_filiform_closed_form(n)], n * n)


@pytest.mark.parametrize("n", range(4, 9))
def test_filiform_11_closed_form_and_beta_kernel(n):
    s = derivation_space(build("mu1_1", n))
    alphas, betas = filiform_11_closed_form(n)
    assert linalg.same_span(s.vectors(), [vec(m) for m in alphas + betas], n * n)
    ev = evaluation_map(s, basis_vector(n, 0))
    assert len(ev) == n and len(ev[0]) == n + 2
    assert linalg.rank(ev) == n


def test_leibniz_matrix_zero_algebra():
    m = leibniz_matrix(Algebra.zero(3))
    assert all(not any(r) for r in m)
    assert derivation_space(Algebra.zero(3)).dim == 9


def test_is_derivation_examples():
    a = build("mu0", 3)
    ident = [[ONE if i == j else ZERO for j in range(3)] for i in range(3)]
    ok, res = is_derivation(ident, a)
    assert not ok
    assert res[(1, 1)] == [ZERO, -ONE, ZERO]
    assert is_derivation([[ZERO] * 3 for _ in range(3)], a)[0]
    for b in derivation_space(a).basis:
        assert is_derivation(b, a)[0]
        assert not leibniz_residuals(b, a)


def test_evaluation_map_examples():
    n = 5
    s = derivation_space(build("mu0", n))
    assert not any(any(r) for r in evaluation_map(s, [ZERO] * n))
    assert linalg.rank(evaluation_map(s, basis_vector(n, 0))) == n
    with pytest.raises(DimensionMismatch):
        evaluation_map(s, [ONE] * 3)


@pytest.mark.parametrize("name,n,alpha", [("m13", None, None), ("mu2_4", 6, None),
                                          ("A4", None, "2"), ("mu0", 4, None)])
def test_symbolic_evaluation_agrees_pointwise(name, n, alpha):
    a = build(name, n, alpha)
    s = derivation_space(a)
    sym = symbolic_evaluation_map(s)
    rng = random.Random(3)
    for _ in range(5):
        x = [random_scalar(rng) for _ in range(a.n)]
        assert eval_matrix(sym, x) == evaluation_map(s, x)
    assert all(p.degree() <= 1 for row in sym for p in row)


def test_symbolic_evaluation_zero_algebra_rank():
    s = derivation_space(Algebra.zero(3))
    assert poly_rank(symbolic_evaluation_map(s)) == 3


def test_vec_round_trip_and_commutator():
    m = [[Scalar(3 * i + j) for j in range(3)] for i in range(3)]
    assert unvec(vec(m), 3) == m
    assert not any(any(r) for r in commutator(m, m))


@pytest.mark.parametrize("name,n,alpha", catalog_instances())
def test_lie_closure(name, n, alpha):
    s = derivation_space(build(name, n, alpha))
    for i, d1 in enumerate(s.basis):
        for d2 in s.basis[i + 1:]:
            assert s.contains(commutator(d1, d2))


def test_coordinates_round_trip():
    s = derivation_space(build("mu2_1", 6))
    rng = random.Random(5)
    coeffs = [random_scalar(rng) for _ in range(s.dim)]
    d = s.from_coords(coeffs)
    assert s.coords(d) == coeffs
    x = [random_scalar(rng) for _ in range(6)]
    assert linalg.matvec(evaluation_map(s, x), coeffs) == apply(d, x)
