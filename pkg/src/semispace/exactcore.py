"""Exact rational linear algebra and LP feasibility.

Everything here works over :class:`fractions.Fraction`; there is no floating
point in this module.  Vectors are plain tuples of Fractions, matrices are
:class:`QMatrix` (which remembers its column count, so ``0 x n`` matrices are
representable).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

QVector = tuple  # tuple[Fraction, ...]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` or ``"0.25"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # floats are accepted only when they are exactly representable short decimals
        return Fraction(repr(x))
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def qvector(entries: Iterable) -> QVector:
    return tuple(as_fraction(e) for e in entries)


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class QMatrix:
    rows: tuple
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], ncols: Optional[int] = None) -> "QMatrix":
        rows = tuple(qvector(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> QVector:
        return tuple(r[j] for r in self.rows)

    def select_columns(self, cols: Sequence[int]) -> "QMatrix":
        return QMatrix(tuple(tuple(r[j] for j in cols) for r in self.rows), len(cols))

    def transpose(self) -> "QMatrix":
        return QMatrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def apply(self, v: Sequence) -> QVector:
        """Matrix-vector product ``M v``."""
        return tuple(dot(r, v) for r in self.rows)

    def left_apply(self, y: Sequence) -> QVector:
        """Row combination ``y M``."""
        out = [Fraction(0)] * self.ncols
        for c, r in zip(y, self.rows):
            if c:
                for j, a in enumerate(r):
                    out[j] += c * a
        return tuple(out)


def rref(M: QMatrix):
    """Reduced row echelon form.

    Returns ``(R, pivots, rank)`` where ``R`` has the same shape as ``M``
    (zero rows at the bottom) and ``pivots`` lists the pivot columns.
    """
    A = [list(r) for r in M.rows]
    m, n = M.nrows, M.ncols
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        p = next((i for i in range(row, m) if A[i][col] != 0), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        inv = 1 / A[row][col]
        A[row] = [a * inv for a in A[row]]
        for i in range(m):
            if i != row and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
        pivots.append(col)
        row += 1
    return QMatrix(tuple(tuple(r) for r in A), n), tuple(pivots), len(pivots)


def rank(M: QMatrix) -> int:
    return rref(M)[2]


def kernel_basis(M: QMatrix) -> QMatrix:
    """Basis (as rows) of ``{v : M v = 0}``; one vector per free column."""
    R, pivots, r = rref(M)
    n = M.ncols
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R.rows[i][f]
        basis.append(tuple(v))
    return QMatrix(tuple(basis), n)


def row_space_basis(M: QMatrix) -> QMatrix:
    R, _, r = rref(M)
    return QMatrix(R.rows[:r], M.ncols)


# ---------------------------------------------------------------------------
# Linear programming

@dataclass(frozen=True)
class LinearSystem:
    """Constraints on ``x`` in ``Q^dim``.

    ``equalities``: ``a.x == b``; ``strict``: ``a.x > b``; ``weak``: ``a.x >= b``.
    Each entry is a pair ``(a, b)``.
    """

    dim: int
    equalities: tuple = field(default=())
    strict: tuple = field(default=())
    weak: tuple = field(default=())

    def __post_init__(self):
        for group in (self.equalities, self.strict, self.weak):
            for a, _ in group:
                if len(a) != self.dim:
                    raise ValueError("constraint dimension mismatch")

    def satisfied_by(self, x: Sequence) -> bool:
        return (all(dot(a, x) == b for a, b in self.equalities)
                and all(dot(a, x) > b for a, b in self.strict)
                and all(dot(a, x) >= b for a, b in self.weak))


def _pivot(T, basis, r, c):
    inv = 1 / T[r][c]
    T[r] = [a * inv for a in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    basis[r] = c


def _run_simplex(T, basis, cost, allowed):
    """Maximize ``cost`` over the tableau with Bland's rule.

    Returns ``"optimal"`` or ``"unbounded"``; the tableau is modified in place.
    """
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            rc = cost[j] - sum((cost[basis[i]] * T[i][j] for i in range(len(T))), Fraction(0))
            if rc > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i in range(len(T)):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], entering)


def simplex_max(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence):
    """Maximize ``c.z`` subject to ``A_eq z = b_eq``, ``z >= 0``; exact, two-phase.

    Returns ``(status, z, value)`` with status in ``{"optimal", "infeasible",
    "unbounded"}``; ``z`` is a basic feasible point when the problem is feasible.
    """
    n = len(c)
    T = []
    for row, rhs in zip(A_eq, b_eq):
        row = [as_fraction(a) for a in row]
        rhs = as_fraction(rhs)
        if rhs < 0:
            row, rhs = [-a for a in row], -rhs
        T.append(row + [rhs])
    m = len(T)
    # artificial columns n..n+m-1 inserted before the rhs column
    for i, row in enumerate(T):
        T[i] = row[:-1] + [Fraction(int(k == i)) for k in range(m)] + [row[-1]]
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    _run_simplex(T, basis, phase1, range(n + m))
    if sum((T[i][-1] for i in range(m) if basis[i] >= n), Fraction(0)) > 0:
        return "infeasible", None, None
    # drive remaining (zero-valued) artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0), None)
            if j is None:
                continue  # redundant row
            _pivot(T, basis, i, j)
        keep.append(i)
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    cost = [as_fraction(x) for x in c]
    status = _run_simplex(T, basis, cost, range(n))
    z = [Fraction(0)] * n
    for i, b in enumerate(basis):
        z[b] = T[i][-1]
    value = dot(cost, z)
    return status, tuple(z), value


def lp_feasible(sys: LinearSystem) -> Optional[QVector]:
    """Exact feasibility with a witness, or ``None``.

    Strict rows ``a.x > b`` become ``a.x - s >= b`` with a shared slack
    ``0 <= s <= 1`` which is maximized; the system is feasible iff the optimum
    is positive.  The witness is that optimal point, so it sits at distance
    ``s*`` inside every strict constraint.
    """
    d = sys.dim
    use_slack = bool(sys.strict)
    # columns: x+ (d), x- (d), [s], then one surplus/slack column per inequality
    n_ineq = len(sys.weak) + len(sys.strict) + (1 if use_slack else 0)
    base = 2 * d + (1 if use_slack else 0)
    ncol = base + n_ineq
    rows, rhs = [], []

    def var_part(a):
        return list(a) + [-x for x in a]

    for a, b in sys.equalities:
        rows.append(var_part(a) + [Fraction(0)] * (ncol - 2 * d))
        rhs.append(b)
    k = base
    for a, b in sys.weak:
        r = var_part(a) + [Fraction(0)] * (ncol - 2 * d)
        r[k] = Fraction(-1)  # a.x - surplus = b
        rows.append(r)
        rhs.append(b)
        k += 1
    for a, b in sys.strict:
        r = var_part(a) + [Fraction(0)] * (ncol - 2 * d)
        r[2 * d] = Fraction(-1)
        r[k] = Fraction(-1)  # a.x - s - surplus = b
        rows.append(r)
        rhs.append(b)
        k += 1
    if use_slack:
        r = [Fraction(0)] * ncol
        r[2 * d] = Fraction(1)
        r[k] = Fraction(1)  # s + slack = 1
        rows.append(r)
        rhs.append(Fraction(1))
    c = [Fraction(0)] * ncol
    if use_slack:
        c[2 * d] = Fraction(1)
    status, z, value = simplex_max(c, rows, rhs)
    if status == "infeasible":
        return None
    if use_slack and value <= 0:
        return None
    x = tuple(z[i] - z[d + i] for i in range(d))
    assert sys.satisfied_by(x)
    return x


def lp_maximize(objective: Sequence, sys: LinearSystem):
    """Maximize ``objective . x`` over the closed system (strict rows are
    relaxed to weak ones).  Returns ``(status, x, value)``."""
    d = sys.dim
    ineq = tuple(sys.weak) + tuple(sys.strict)
    ncol = 2 * d + len(ineq)
    rows, rhs = [], []
    for a, b in sys.equalities:
        rows.append(list(a) + [-x for x in a] + [Fraction(0)] * len(ineq))
        rhs.append(b)
    for k, (a, b) in enumerate(ineq):
        r = list(a) + [-x for x in a] + [Fraction(0)] * len(ineq)
        r[2 * d + k] = Fraction(-1)
        rows.append(r)
        rhs.append(b)
    c = [as_fraction(x) for x in objective]
    c = c + [-x for x in c] + [Fraction(0)] * len(ineq)
    status, z, value = simplex_max(c, rows, rhs)
    if status != "optimal":
        return status, None, None
    return status, tuple(z[i] - z[d + i] for i in range(d)), value
