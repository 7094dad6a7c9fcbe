import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semispace.arrangement import (AffineSlice, all_patterns, check_genericity, enumerate_regions,
                                   minimize_region, real_point_census, recession_trivial, region_bounded)
from semispace.errors import GenericityError, PreconditionError
from semispace.exactcore import QMatrix
from semispace.matroid import loops, matroid_from_matrix

from conftest import EXAMPLE_U, random_matrix


@pytest.mark.parametrize("I,total,qualifying", [({0, 1, 2}, 7, 7), ({0, 1, 2, 3}, 10, 6),
                                                 ({0, 1, 2, 3, 4}, 14, 4)])
def test_example_census(example_matrix, I, total, qualifying):
    c = real_point_census(example_matrix, I, EXAMPLE_U)
    assert c.total_regions == total
    assert len(c.qualifying) == qualifying == c.degree.by_facets == len(c.points)
    assert c.counts_agree
    assert c.max_residual < 1e-8
    assert c.min_separation > 1e-4


def test_points_lie_in_their_regions(example_matrix):
    c = real_point_census(example_matrix, {0, 1, 2, 3}, EXAMPLE_U)
    A = np.array([[float(x) for x in r] for r in example_matrix.rows])
    u = np.array([float(x) for x in EXAMPLE_U])
    for r in c.qualifying:
        p = r.real_point
        assert np.allclose(A @ (p - u), 0, atol=1e-9)
        for i, s in zip(r.pattern.indices, r.pattern.signs):
            assert s * p[i] > 0


def test_full_I_qualifying_means_bounded(example_matrix):
    s = AffineSlice.from_matrix(example_matrix, EXAMPLE_U)
    I = set(range(5))
    for r in enumerate_regions(s, I):
        assert r.recession_trivial == region_bounded(s, r.pattern)


def test_loop_in_I_is_rejected():
    A = QMatrix.from_rows([[1, 0, 1], [0, 0, 1]])
    with pytest.raises(PreconditionError):
        real_point_census(A, {1}, (1, 2, 3))


def test_non_generic_translation_is_reported(example_matrix):
    with pytest.raises(GenericityError) as info:
        real_point_census(example_matrix, {0, 1, 2, 3, 4}, (0, 0, 0, 0, 0))
    assert info.value.patterns


def test_zero_dimensional_slice():
    # L is everything, so the slice is the single point u
    A = QMatrix.identity(2)
    c = real_point_census(A, {0, 1}, (1, -2))
    assert c.total_regions == 1 and len(c.qualifying) == 1 == c.degree.by_facets
    assert c.regions[0].pattern.label() == "+-"


def test_minimize_rejects_outside_witness(example_matrix):
    s = AffineSlice.from_matrix(example_matrix, EXAMPLE_U)
    sigma = all_patterns({0, 1, 2})[0]
    with pytest.raises(ValueError):
        minimize_region(s, {0, 1, 2}, sigma, (-1, 0, 0, 0, 0))


def _random_instance(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 3)
    n = rng.randint(d + 1, 5)
    A = random_matrix(rng, d, n)
    I = {i for i in range(n) if rng.random() < 0.6}
    u = tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(n))
    return A, I, u


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_three_way_equality_random(seed):
    A, I, u = _random_instance(seed)
    M = matroid_from_matrix(A)
    if I & loops(M):
        return
    try:
        c = real_point_census(A, I, u, seed=seed)
    except GenericityError:
        return
    assert c.total_regions <= 2 ** len(I)
    assert c.degree.by_facets == len(c.qualifying) == len(c.points)
    assert c.max_residual < 1e-8
    if len(c.points) > 1:
        assert c.min_separation > 1e-5


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_independent_I_every_region_qualifies(seed):
    A, I, u = _random_instance(seed)
    M = matroid_from_matrix(A)
    if any(set(C) <= I for C in M.circuits):
        return
    s = AffineSlice.from_matrix(A, u)
    assert all(r.recession_trivial for r in enumerate_regions(s, I))


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_recession_matches_boundedness_for_full_I(seed):
    A, _, u = _random_instance(seed)
    s = AffineSlice.from_matrix(A, u)
    I = set(range(A.ncols))
    for r in enumerate_regions(s, I):
        assert recession_trivial(s, I, r.pattern) == region_bounded(s, r.pattern)


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_region_witnesses_cover_sampled_patterns(seed):
    """Every sign pattern seen at random slice points is found by the LP."""
    A, I, u = _random_instance(seed)
    s = AffineSlice.from_matrix(A, u)
    found = {r.pattern.signs for r in enumerate_regions(s, I)}
    rng = np.random.default_rng(seed)
    B = np.array([[float(x) for x in row] for row in s.basis.rows]).reshape(s.dim, s.n)
    u_f = np.array([float(x) for x in u])
    idx = sorted(I)
    for _ in range(300):
        x = u_f + rng.normal(scale=10.0, size=s.dim) @ B
        if all(abs(x[i]) > 1e-9 for i in idx):
            assert tuple(1 if x[i] > 0 else -1 for i in idx) in found


def test_genericity_check_is_deterministic(example_matrix):
    s = AffineSlice.from_matrix(example_matrix, EXAMPLE_U)
    assert check_genericity(s, {0, 1, 2}, seed=3) == [] == check_genericity(s, {0, 1, 2}, seed=3)
