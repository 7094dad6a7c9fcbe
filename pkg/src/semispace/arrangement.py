"""Regions of ``(L^perp + u)`` cut by the hyperplanes ``x_i = 0`` (``i`` in ``I``)
and recovery of the real points of the minus-inverted space.

Region and recession-cone decisions are exact LPs.  Only
:func:`minimize_region` uses floating point.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, GenericityError, PreconditionError
from .exactcore import (LinearSystem, QMatrix, QVector, kernel_basis, lp_feasible, lp_maximize,
                        qvector)
from .invspace import DegreeReport, degree
from .matroid import circuit_forms, loops, matroid_from_matrix
from .poly import circuit_polynomial_minus


@dataclass(frozen=True)
class AffineSlice:
    basis: QMatrix  # rows span L^perp
    offset: QVector
    n: int

    @classmethod
    def from_matrix(cls, A: QMatrix, u: Sequence) -> "AffineSlice":
        u = qvector(u)
        if len(u) != A.ncols:
            raise ValueError("translation vector has the wrong length")
        return cls(kernel_basis(A), u, A.ncols)

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def point(self, lam: Sequence) -> QVector:
        shift = self.basis.left_apply(lam) if self.dim else (Fraction(0),) * self.n
        return tuple(a + b for a, b in zip(self.offset, shift))

    def coordinate_form(self, i: int):
        """``x_i = coeffs . lam + const`` on the slice."""
        return self.basis.column(i), self.offset[i]


@dataclass(frozen=True)
class SignPattern:
    indices: tuple
    signs: tuple

    def __getitem__(self, i):
        return self.signs[self.indices.index(i)]

    def label(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)

    def as_dict(self) -> dict:
        return dict(zip(self.indices, self.signs))


@dataclass
class RegionReport:
    pattern: SignPattern
    witness: QVector
    lam: QVector
    recession_trivial: bool
    real_point: Optional[np.ndarray] = None
    residual: Optional[float] = None
    iterations: Optional[int] = None


def all_patterns(I: Iterable[int]) -> list:
    idx = tuple(sorted(I))
    return [SignPattern(idx, s) for s in itertools.product((1, -1), repeat=len(idx))]


def region_system(slice_: AffineSlice, sigma: SignPattern) -> LinearSystem:
    """``sigma_i x_i > 0`` for ``i`` in ``I`` expressed in slice coordinates."""
    strict = []
    for i, s in zip(sigma.indices, sigma.signs):
        a, c = slice_.coordinate_form(i)
        strict.append((tuple(s * x for x in a), -s * c))
    return LinearSystem(slice_.dim, strict=tuple(strict))


def recession_trivial(slice_: AffineSlice, I: Iterable[int], sigma: SignPattern) -> bool:
    """Does the recession cone of the region meet ``R^I`` only at the origin?

    A nonzero direction ``v`` in ``L^perp`` with ``v_j = 0`` off ``I`` and
    ``sigma_i v_i >= 0`` exists iff the LP with ``sum sigma_i v_i = 1`` added
    is feasible.
    """
    I = frozenset(I)
    m = slice_.dim
    eq, weak = [], []
    for j in range(slice_.n):
        if j not in I:
            eq.append((slice_.basis.column(j), Fraction(0)))
    total = [Fraction(0)] * m
    for i, s in zip(sigma.indices, sigma.signs):
        col = slice_.basis.column(i)
        weak.append((tuple(s * x for x in col), Fraction(0)))
        total = [t + s * x for t, x in zip(total, col)]
    eq.append((tuple(total), Fraction(1)))
    return lp_feasible(LinearSystem(m, equalities=tuple(eq), weak=tuple(weak))) is None


def region_bounded(slice_: AffineSlice, sigma: SignPattern) -> bool:
    """Boundedness of the closed region, by maximizing ``+-lam_k`` for every ``k``."""
    sys_ = region_system(slice_, sigma)
    for k in range(slice_.dim):
        for s in (1, -1):
            obj = [Fraction(0)] * slice_.dim
            obj[k] = Fraction(s)
            status, _, _ = lp_maximize(obj, sys_)
            if status == "unbounded":
                return False
    return True


def enumerate_regions(slice_: AffineSlice, I: Iterable[int]) -> list:
    """One report per sign pattern whose open region is nonempty, in pattern order (+ before -)."""
    I = frozenset(I)
    out = []
    for sigma in all_patterns(I):
        lam = lp_feasible(region_system(slice_, sigma))
        if lam is None:
            continue
        out.append(RegionReport(sigma, slice_.point(lam), lam, recession_trivial(slice_, I, sigma)))
    return out


def _region_signature(slice_, I):
    return {r.pattern.signs: r.recession_trivial for r in enumerate_regions(slice_, I)}


def check_genericity(slice_: AffineSlice, I: Iterable[int], seed: int = 0, scale=Fraction(1, 10 ** 6)) -> list:
    """Patterns whose feasibility or recession status changes under one small
    random rational perturbation of ``u``.  An empty list means "looks generic";
    this is a heuristic, not a proof."""
    rng = random.Random(seed)
    size = max([abs(x) for x in slice_.offset] + [Fraction(1)])
    delta = [Fraction(rng.randint(-1000, 1000), 1000) * scale * size for _ in range(slice_.n)]
    moved = AffineSlice(slice_.basis, tuple(a + b for a, b in zip(slice_.offset, delta)), slice_.n)
    before, after = _region_signature(slice_, I), _region_signature(moved, I)
    changed = [s for s in set(before) | set(after) if before.get(s) != after.get(s)]
    return sorted(changed, reverse=True)


# ---------------------------------------------------------------------------
# Numerical layer

def _objective_parts(x, in_I):
    xi = x[in_I]
    xo = x[~in_I]
    f = 0.5 * float(xo @ xo) - float(np.sum(np.log(np.abs(xi))))
    grad = np.where(in_I, -1.0 / np.where(in_I, x, 1.0), x)
    hess = np.where(in_I, 1.0 / np.where(in_I, x, 1.0) ** 2, 1.0)
    return f, grad, hess


def _polish(x, Q, in_I, inside, steps: int = 3):
    """Full Newton steps taken only while they keep shrinking the gradient."""
    _, g_full, h = _objective_parts(x, in_I)
    gn = np.linalg.norm(Q.T @ g_full)
    for _ in range(steps):
        H = Q.T @ (h[:, None] * Q)
        y = x - Q @ np.linalg.solve(H, Q.T @ g_full)
        if not inside(y):
            break
        _, gy, hy = _objective_parts(y, in_I)
        gyn = np.linalg.norm(Q.T @ gy)
        if gyn >= gn:
            break
        x, g_full, h, gn = y, gy, hy, gyn
    return x


def minimize_region(slice_: AffineSlice, I: Iterable[int], sigma: SignPattern, witness: Sequence,
                    tol: float = 1e-10, max_iter: int = 200):
    """Minimize ``1/2 sum_{j not in I} x_j^2 - sum_{i in I} log|x_i|`` over the region.

    Damped Newton in an orthonormal parametrization of the slice, started at
    ``witness``; steps are halved until the iterate stays in the region and
    satisfies the Armijo condition.  Returns ``(point, iterations)``.
    """
    I = frozenset(I)
    n = slice_.n
    in_I = np.array([j in I for j in range(n)])
    sig = np.zeros(n)
    for i, s in zip(sigma.indices, sigma.signs):
        sig[i] = s
    x = np.array([float(v) for v in witness])
    if slice_.dim == 0:
        return x, 0
    B = np.array([[float(v) for v in row] for row in slice_.basis.rows])
    Q, _ = np.linalg.qr(B.T)  # columns: orthonormal basis of L^perp

    def inside(y):
        return bool(np.all(sig[in_I] * y[in_I] > 0))

    if not inside(x):
        raise ValueError("witness is not inside the region")
    f, g_full, h = _objective_parts(x, in_I)
    for it in range(max_iter):
        g = Q.T @ g_full
        H = Q.T @ (h[:, None] * Q)
        step = -np.linalg.solve(H, g)
        dx = Q @ step
        slope = float(g @ step)
        # gradient norm, or the Newton decrement when rounding floors the gradient
        if np.linalg.norm(g) < tol or -slope < tol * tol:
            return _polish(x, Q, in_I, inside), it
        t = 1.0
        while t > 1e-30:
            y = x + t * dx
            if inside(y):
                fy = _objective_parts(y, in_I)[0]
                # near the optimum the predicted decrease is below float resolution
                if fy <= f + 1e-4 * t * slope or -slope < 1e-12 * (1 + abs(f)):
                    break
            t *= 0.5
        else:
            break
        x = y
        f, g_full, h = _objective_parts(x, in_I)
    g = Q.T @ g_full
    raise ConvergenceError(f"Newton did not reach gradient norm {tol:g} in region {sigma.label()} "
                           f"(final norm {np.linalg.norm(g):.3g})")


@dataclass
class CensusReport:
    n: int
    I: tuple
    u: QVector
    regions: list
    degree: DegreeReport
    generic_changes: list = field(default_factory=list)

    @property
    def total_regions(self) -> int:
        return len(self.regions)

    @property
    def qualifying(self) -> list:
        return [r for r in self.regions if r.recession_trivial]

    @property
    def points(self) -> list:
        return [r.real_point for r in self.qualifying if r.real_point is not None]

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.qualifying if r.residual is not None), default=0.0)

    @property
    def min_separation(self) -> float:
        pts = self.points
        return min((float(np.linalg.norm(p - q)) for p, q in itertools.combinations(pts, 2)), default=float("inf"))

    @property
    def counts_agree(self) -> bool:
        return self.degree.by_facets == len(self.qualifying) == len(self.points)


def real_point_census(A: QMatrix, I: Iterable[int], u: Sequence, tol: float = 1e-10,
                      w: Optional[Sequence] = None, check_generic: bool = True, seed: int = 0,
                      recover_points: bool = True) -> CensusReport:
    """Count regions whose recession cone meets ``R^I`` trivially, recover the
    point of the minus-inverted space in each, and compare with the degree."""
    I = frozenset(I)
    M = matroid_from_matrix(A)
    if I & loops(M):
        raise PreconditionError(f"element(s) {sorted(e + 1 for e in I & loops(M))} of I are loops")
    slice_ = AffineSlice.from_matrix(A, u)
    changes = check_genericity(slice_, I, seed) if check_generic else []
    if changes:
        raise GenericityError("region structure changes under a small perturbation of u",
                              ["".join("+" if s > 0 else "-" for s in p) for p in changes])
    regions = enumerate_regions(slice_, I)
    fms = [circuit_polynomial_minus(cf, I) for cf in circuit_forms(A, M)]
    for r in regions:
        if not (recover_points and r.recession_trivial):
            continue
        p, its = minimize_region(slice_, I, r.pattern, r.witness, tol)
        r.real_point, r.iterations = p, its
        r.residual = max((abs(float(f.evaluate(list(p)))) for f in fms), default=0.0)
    w = tuple(range(1, A.ncols + 1)) if w is None else tuple(w)
    return CensusReport(A.ncols, tuple(sorted(I)), slice_.offset, regions, degree(M, I, w), changes)
