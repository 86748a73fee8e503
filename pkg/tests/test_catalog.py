import pytest

from derivkit.algebra import Algebra
from derivkit.catalog import (
    DimensionOutOfRange, DuplicateProductEntry, IndexOutOfRange, MissingOrForbiddenParameter,
    SchemaError, UnknownFamily, build, dump_algebra, family, list_families, parse_algebra,
    product_lines,
)
from derivkit.scalar import I, ONE, Scalar


def prods(a):
    return [p.replace(" ", "") for p in product_lines(a)]


def test_listing():
    fams = list_families()
    names = [f for f, _, _ in fams]
    assert names[0] == "mu0"
    assert len(names) == len(set(names)) == 42
    m21 = next(c for f, _, c in fams if f == "m21")
    assert "i" in m21 and "-i" in m21
    assert list_families() == fams


def test_show_examples():
    assert prods(build("mu0", 3)) == ["e1*e1=e2", "e1*e2=e3", "e2*e1=e3"]
    assert sorted(prods(build("mu1_2", 5))) == sorted(
        ["e1*e1=e2", "e1*e2=e3", "e2*e1=e3", "e1*e3=e4", "e3*e1=e4", "e2*e2=e4", "e5*e5=e4"])
    assert prods(build("A3")) == ["e1*e2=e3", "e2*e1=-e3"]
    m22 = build("m22", alpha=0)
    assert m22.c[3][0][1] == ONE
    assert m22.c[3][0][4] == 0


def test_a4_products():
    a = build("A4", alpha=2)
    assert a.c[0][0][2] == ONE and a.c[1][1][2] == Scalar(2) and a.c[0][1][2] == ONE


def test_mu22_products():
    a = build("mu2_2", 7, -1)
    assert a.c[0][5][6] == ONE and a.c[5][0][6] == -ONE
    assert a.c[1][2][4] == ONE  # e2 e3 = e5 = e_{n-2}
    assert not any(a.c[1][3])  # e2 e4 = 0 since 6 > n-2


def test_errors():
    with pytest.raises(UnknownFamily):
        build("nope")
    with pytest.raises(MissingOrForbiddenParameter):
        build("m21")
    with pytest.raises(MissingOrForbiddenParameter):
        build("m21", alpha=2)
    with pytest.raises(MissingOrForbiddenParameter):
        build("mu0", 4, alpha=1)
    with pytest.raises(DimensionOutOfRange):
        build("mu1_1", 3)
    with pytest.raises(DimensionOutOfRange):
        build("mu2_1", 5)
    with pytest.raises(DimensionOutOfRange):
        build("A1", 4)
    assert build("m21", alpha=I).n == 5
    assert build("m21", alpha="-i").n == 5
    assert family("mu0").fixed_dim is None


def test_parse_examples():
    a = parse_algebra("dim: 2\nproducts:\n  - e1*e1 = e2\n")
    assert [(i, j) for i, j, _ in a.nonzero_products()] == [(1, 1)]
    doc = "dim: 3\nlabel: nf3\nproducts:\n  - e1*e1 = e2\n  - e1*e2 = e3\n  - e2*e1 = e3\n"
    assert parse_algebra(doc).same_tensor(build("mu0", 3))
    with pytest.raises(IndexOutOfRange):
        parse_algebra("dim: 4\nproducts:\n  - e5*e1 = e2\n")
    with pytest.raises(DuplicateProductEntry):
        parse_algebra("dim: 2\nproducts:\n  - e1*e1 = e2\n  - e1*e1 = 2*e2\n")


@pytest.mark.parametrize("doc,where", [
    ("dim: x\n", "dim"),
    ("products: []\n", "dim"),
    ("dim: 2\ncolour: red\n", "colour"),
    ("dim: 2\nproducts:\n  - e1*e1 - e2\n", "products"),
    ("dim: 2\nproducts:\n  - e1e1 = e2\n", "products"),
    ("dim: 2\nproducts:\n  - e1*e1 = 2.5*e2\n", "products"),
    ("- just\n- a list\n", None),
])
def test_schema_errors(doc, where):
    with pytest.raises(SchemaError) as info:
        parse_algebra(doc)
    if where is not None:
        assert where in str(info.value) or getattr(info.value, "field", None) == where


def test_complex_coefficients_round_trip():
    a = build("m21", alpha="i")
    back = parse_algebra(dump_algebra(a))
    assert back.same_tensor(a)
    b = Algebra.from_products(2, {(1, 1): {2: Scalar(1, -2) / 3}}, "weird")
    assert parse_algebra(dump_algebra(b)).same_tensor(b)


def test_dump_round_trip_all_families():
    from derivkit.acceptance import catalog_instances

    for name, n, alpha in catalog_instances():
        a = build(name, n, alpha)
        assert parse_algebra(dump_algebra(a)).same_tensor(a)
