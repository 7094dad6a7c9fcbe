from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from semispace.exactcore import (LinearSystem, QMatrix, as_fraction, format_fraction, kernel_basis,
                                 lp_feasible, lp_maximize, rank, rref, simplex_max)

small = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, max_rows=4, max_cols=6):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return QMatrix.from_rows([[draw(small) for _ in range(n)] for _ in range(m)])


def test_as_fraction_forms():
    assert as_fraction("-3/4") == Fraction(-3, 4)
    assert as_fraction("0.25") == Fraction(1, 4)
    assert as_fraction(0.1) == Fraction(1, 10)
    with pytest.raises(TypeError):
        as_fraction(True)
    assert format_fraction(Fraction(6, 3)) == "2"
    assert format_fraction(Fraction(-1, 3)) == "-1/3"


def test_rref_matches_sympy_on_example(example_matrix):
    R, piv, r = rref(QMatrix.from_rows([[2, 4, 1], [1, 2, 0], [3, 6, 1]]))
    S, spiv = sympy.Matrix([[2, 4, 1], [1, 2, 0], [3, 6, 1]]).rref()
    assert piv == spiv and r == 2
    assert [[Fraction(int(x.p), int(x.q)) for x in S.row(i)] for i in range(3)] == [list(row) for row in R.rows]


def test_zero_row_matrix_kernel():
    K = kernel_basis(QMatrix((), 3))
    assert K.nrows == 3 and rank(K) == 3


@given(matrices())
def test_rref_idempotent_and_rank_matches_sympy(A):
    R, piv, r = rref(A)
    assert rref(R)[0] == R
    assert r == sympy.Matrix([list(row) for row in A.rows]).rank()


@given(matrices())
def test_kernel_is_annihilated_and_has_right_dimension(A):
    K = kernel_basis(A)
    assert K.nrows == A.ncols - rank(A)
    for v in K.rows:
        assert all(x == 0 for x in A.apply(v))
    if K.nrows:
        assert rank(K) == K.nrows


def _scipy_margin(sys_):
    """Float oracle: maximize a shared margin on the strict rows (capped at 1)."""
    d = sys_.dim
    c = np.zeros(d + 1)
    c[-1] = -1.0
    A_ub, b_ub = [], []
    for a, b in sys_.strict:
        A_ub.append([-float(x) for x in a] + [1.0])
        b_ub.append(-float(b))
    for a, b in sys_.weak:
        A_ub.append([-float(x) for x in a] + [0.0])
        b_ub.append(-float(b))
    A_eq = [[float(x) for x in a] + [0.0] for a, _ in sys_.equalities] or None
    b_eq = [float(b) for _, b in sys_.equalities] or None
    res = linprog(c, A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * d + [(0, 1)], method="highs")
    if res.status == 2:
        return None
    return -res.fun


@st.composite
def systems(draw):
    d = draw(st.integers(1, 3))
    row = st.tuples(st.lists(small, min_size=d, max_size=d), small)
    strict = draw(st.lists(row, max_size=4))
    weak = draw(st.lists(row, max_size=3))
    eq = draw(st.lists(row, max_size=1))
    conv = lambda rows: tuple((tuple(Fraction(x) for x in a), Fraction(b)) for a, b in rows)
    return LinearSystem(d, equalities=conv(eq), strict=conv(strict), weak=conv(weak))


@given(systems())
def test_lp_feasible_agrees_with_float_oracle(sys_):
    x = lp_feasible(sys_)
    margin = _scipy_margin(sys_)
    if x is not None:
        assert sys_.satisfied_by(x)
        assert margin is not None and (not sys_.strict or margin > 1e-9)
    else:
        # small integer data: a positive margin would be far from zero
        assert margin is None or (sys_.strict and margin < 1e-7)


def test_lp_feasible_strict_boundary():
    one = (Fraction(1),)
    # x > 0 and -x > 0 is empty; x >= 0 and -x >= 0 is the point 0
    assert lp_feasible(LinearSystem(1, strict=((one, 0), ((Fraction(-1),), 0)))) is None
    assert lp_feasible(LinearSystem(1, weak=((one, 0), ((Fraction(-1),), 0)))) == (0,)


def test_simplex_max_statuses():
    assert simplex_max([1, 0], [[1, 1]], [1])[0] == "optimal"
    assert simplex_max([1, 0], [[1, -1]], [1])[0] == "unbounded"
    assert simplex_max([1], [[1], [1]], [1, 2])[0] == "infeasible"
    status, z, val = simplex_max([1, 2], [[1, 1]], [3])
    assert status == "optimal" and val == 6 and z == (0, 3)


def test_lp_maximize_box():
    sys_ = LinearSystem(2, weak=(((1, 0), 0), ((0, 1), 0), ((-1, -1), -2)))
    status, x, val = lp_maximize([1, 2], sys_)
    assert status == "optimal" and val == 4 and x == (0, 2)
    assert lp_maximize([-1, -1], sys_)[2] == 0
    assert lp_maximize([1, 0], LinearSystem(2, weak=(((1, 0), 0),)))[0] == "unbounded"
