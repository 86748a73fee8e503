import math

import pytest

from derivkit.acceptance import catalog_instances
from derivkit.algebra import (
    Algebra, NotNilpotent, basis_vector, check_associativity, chi, classify_shape, multiply,
    nilindex, power_chain,
)
from derivkit.catalog import build
from derivkit.linalg import DimensionMismatch
from derivkit.scalar import ONE, ZERO, Scalar


def e(n, i):
    return basis_vector(n, i - 1)


def test_products_of_null_filiform():
    a = build("mu0", 4)
    assert multiply(a, e(4, 1), e(4, 2)) == e(4, 3)
    assert multiply(a, e(4, 3), e(4, 2)) == [ZERO] * 4
    assert multiply(a, [ZERO] * 4, e(4, 1)) == [ZERO] * 4


def test_multiply_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        multiply(build("mu0", 4), [ONE] * 3, e(4, 1))


def test_bilinearity():
    a = build("m13")
    x = [Scalar(k) for k in (1, -2, 3, 0, 5)]
    y = [Scalar(k) for k in (2, 1, -1, 4, 0)]
    z = [Scalar(k) for k in (0, 3, 1, 1, -2)]
    lhs = multiply(a, x, [p + 3 * q for p, q in zip(y, z)])
    rhs = [p + 3 * q for p, q in zip(multiply(a, x, y), multiply(a, x, z))]
    assert lhs == rhs


def test_power_chain_examples():
    dims, nil, _ = power_chain(build("mu0", 4))
    assert dims == [4, 3, 2, 1] and nil == 5
    dims, nil, _ = power_chain(build("lam1"))
    assert dims == [5, 2, 1] and nil == 4
    dims, nil, _ = power_chain(Algebra.zero(3))
    assert dims == [3] and nil == 2


def test_chi_examples():
    assert chi(build("m4")) == (5, 3, 1, 0, 0)
    assert chi(build("lam6", alpha=2)) == (5, 2, 1, 0, 0)
    assert chi(build("mu0", 5)) == (5, 4, 3, 2, 1)


def test_shapes():
    for n in range(2, 9):
        assert classify_shape(build("mu0", n)) == "null-filiform"
    assert classify_shape(build("mu1_2", 6)) == "filiform"
    assert classify_shape(build("mu2_3", 7)) == "quasi-filiform"


def test_not_nilpotent():
    idem = Algebra.from_products(1, {(1, 1): {1: ONE}})
    assert nilindex(idem) == math.inf
    with pytest.raises(NotNilpotent):
        chi(idem)
    with pytest.raises(NotNilpotent):
        classify_shape(idem)


def test_associativity_examples():
    assert check_associativity(build("mu0", 5)) == []
    assert check_associativity(build("A5")) == []
    bad = Algebra.from_products(2, {(1, 1): {2: ONE}, (2, 1): {1: ONE}})
    assert check_associativity(bad)


@pytest.mark.parametrize("name,n,alpha", catalog_instances())
def test_catalog_algebras_are_associative_and_nilpotent(name, n, alpha):
    a = build(name, n, alpha)
    assert check_associativity(a) == []
    dims = chi(a)
    assert dims[0] == a.n and dims[-1] in (0, 1)
    if name.startswith("lam"):
        assert dims == (5, 2, 1, 0, 0)
    elif name.startswith("m") and not name.startswith("mu"):
        assert dims == (5, 3, 1, 0, 0)
    elif name.startswith("A"):
        assert classify_shape(a) in ("filiform", "null-filiform")
    elif name.startswith("mu1"):
        assert classify_shape(a) == "filiform"
    elif name.startswith("mu2"):
        assert classify_shape(a) == "quasi-filiform"


@pytest.mark.parametrize("n", range(4, 11))
def test_family_shapes_across_n(n):
    for f in ("mu1_1", "mu1_2", "mu1_3", "mu1_4"):
        assert classify_shape(build(f, n)) == "filiform"
    if n >= 6:
        for f, al in (("mu2_1", None), ("mu2_2", 2), ("mu2_3", None), ("mu2_4", None)):
            a = build(f, n, al)
            assert classify_shape(a) == "quasi-filiform"
            assert check_associativity(a) == []
