import sympy as sp
from hypothesis import given, strategies as st

from conftest import sympy_matrix
from derivkit import linalg
from derivkit.scalar import I, ONE, ZERO, Scalar, as_scalar

small = st.integers(-3, 3).map(as_scalar)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(small) + draw(small) * I for _ in range(c)] for _ in range(r)]


def test_nullspace_examples():
    assert len(linalg.nullspace(linalg.zeros(3, 3), 3)) == 3
    assert linalg.nullspace(linalg.identity(3), 3) == []
    m = [[ONE, I], [-I, ONE]]
    ns = linalg.nullspace(m, 2)
    assert len(ns) == 1
    assert linalg.matvec(m, ns[0]) == [ZERO, ZERO]
    assert linalg.same_span(ns, [[-I, ONE]], 2)


@given(matrices())
def test_rank_nullity_and_sympy_rank(m):
    cols = len(m[0])
    ns = linalg.nullspace(m, cols)
    assert linalg.rank(m) + len(ns) == cols
    assert linalg.rank(m) == sympy_matrix(m).rank()
    for v in ns:
        assert not any(linalg.matvec(m, v))


@given(matrices())
def test_left_nullspace(m):
    left = linalg.left_nullspace(m)
    assert len(left) == len(m) - linalg.rank(m)
    for w in left:
        assert not any(linalg.matvec(linalg.transpose(m), w))


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve(m, coeffs):
    cols = len(m[0])
    b = linalg.matvec(m, coeffs[:cols])
    x = linalg.solve(m, b)
    assert x is not None and linalg.matvec(m, x) == b


def test_solve_inconsistent():
    m = [[ONE, ONE], [ONE, ONE]]
    assert linalg.solve(m, [ONE, ZERO]) is None


def test_row_space_is_canonical():
    a = [[ONE, Scalar(2)], [Scalar(2), Scalar(4)], [ZERO, ONE]]
    b = [[ZERO, Scalar(5)], [Scalar(3), ZERO]]
    assert linalg.row_space(a, 2) == linalg.row_space(b, 2)
    assert linalg.same_span(a, b, 2)
    assert linalg.span_contains(a, [[I, I]], 2)


def test_echelon_incremental():
    e = linalg.Echelon(3)
    assert e.add([ONE, ONE, ZERO])
    assert not e.add([Scalar(2), Scalar(2), ZERO])
    assert e.add([ZERO, ZERO, ONE])
    assert e.rank == 2
    assert e.contains([ONE, ONE, Scalar(7)])
    ns = e.nullspace()
    assert len(ns) == 1 and sp.Matrix([[1, 1, 0], [0, 0, 1]]).nullspace()[0].T.tolist()[0] == [
        int(str(x)) for x in ns[0]]
