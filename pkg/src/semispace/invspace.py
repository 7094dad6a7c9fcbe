"""Degree, Hilbert series, supports and Groebner-basis verification for
semi-inverted linear spaces."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Optional, Sequence

from .errors import PreconditionError, ResourceLimitError
from .exactcore import QMatrix
from .matroid import (Matroid, circuit_forms, coloops, contract, delete, drop_index, is_flat,
                      loops, matroid_from_matrix, minimal_sets, rank_of)
from .poly import (DEFAULT_MAX_PAIRS, MonomialOrder, Poly, buchberger, circuit_polynomial,
                   initial_form, inv_ideal_oracle, normal_form, s_pair_criterion)
from .scomplex import fh_vectors, semi_broken_complex, sr_generators, _check_distinct


@dataclass(frozen=True)
class DegreeReport:
    by_facets: int
    by_recursion: int
    by_formula: Optional[int]
    hilbert_h: tuple

    @property
    def consistent(self) -> bool:
        vals = {self.by_facets, self.by_recursion}
        if self.by_formula is not None:
            vals.add(self.by_formula)
        return len(vals) == 1 and (not self.hilbert_h or sum(self.hilbert_h) == self.by_facets)


def binom(a: int, b: int) -> int:
    """Binomial coefficient that is 0 whenever ``a < 0`` or ``b < 0``."""
    if a < 0 or b < 0:
        return 0
    return comb(a, b)


def uniform_degree(d: int, n: int, k: int) -> int:
    """Closed-form degree for a generic ``d``-space in ``Q^n`` with ``k`` inverted coordinates."""
    return sum(binom(k, j) for j in range(k + d - n, d + 1)) - binom(k - 1, d)


def degree_by_recursion(M: Matroid, I: Iterable[int]) -> int:
    """Loop/coloop/deletion-contraction recursion on the smallest element of ``I``.

    Independent of any weight vector, unlike the facet recursion which peels
    off ``max_w(I)``.
    """
    I = frozenset(I)
    if not I:
        return 1
    if I & loops(M):
        return 0
    i = min(I)
    rest = drop_index(I - {i}, i)
    below = degree_by_recursion(contract(M, i), rest)
    if i in coloops(M):
        return below
    return degree_by_recursion(delete(M, i), rest) + below


def degree(M: Matroid, I: Iterable[int], w: Sequence) -> DegreeReport:
    _check_distinct(w)
    I = frozenset(I)
    D = semi_broken_complex(M, I, w)
    by_formula = uniform_degree(M.rank, M.n, len(I)) if M.is_uniform() else None
    return DegreeReport(len(D.facets), degree_by_recursion(M, I), by_formula, fh_vectors(D).h)


def affine_hilbert_numerator(M: Matroid, I: Iterable[int], w: Sequence) -> list:
    """Numerator ``h_0 + h_1 t + ... + h_d t^d`` of the affine Hilbert series over ``(1-t)^(d+1)``."""
    D = semi_broken_complex(M, I, w)
    if D.is_void:
        return [0]
    return list(fh_vectors(D).h)


def support_achievable(M: Matroid, I: Iterable[int], S: Iterable[int]) -> bool:
    """Is there a point of the semi-inverted space whose support is exactly ``S``?

    With ``T = S + ([n] - I)`` this holds iff ``T`` is a flat of ``M`` and
    ``T - S`` is a flat of the restriction ``M|_T``.
    """
    I, S = frozenset(I), frozenset(S)
    if I & loops(M):
        return False
    T = S | (frozenset(M.ground) - I)
    if not is_flat(M, T):
        return False
    # flat of M|_T: every element of S raises the rank of T - S
    U = T - S
    r = rank_of(M, U)
    return all(rank_of(M, U | {s}) > r for s in S)


def achievable_supports(M: Matroid, I: Iterable[int]) -> list:
    I = frozenset(I)
    if I & loops(M):
        return []
    out = []
    for mask in range(1 << M.n):
        S = frozenset(e for e in M.ground if mask >> e & 1)
        if support_achievable(M, I, S):
            out.append(tuple(sorted(S)))
    return sorted(out, key=lambda s: (len(s), s))


def support_by_oracle(oracle_gens: Sequence[Poly], S: Iterable[int],
                      max_pairs: int = DEFAULT_MAX_PAIRS) -> bool:
    """Decide via the Nullstellensatz whether the variety of ``oracle_gens``
    has a point with support exactly ``S``.

    Sets ``x_j = 0`` off ``S`` and adds ``1 - y * prod_{i in S} x_i`` in a
    new variable ``y``; such a point exists iff the result is not the unit
    ideal.
    """
    S = frozenset(S)
    n = oracle_gens[0].nvars if oracle_gens else 0
    gens = []
    for g in oracle_gens:
        for j in range(n):
            if j not in S:
                g = g.substitute(j, 0)
        if g:
            gens.append(g.embed(n + 1))
    gens.append(Poly.constant(1, n + 1) - Poly.monomial(tuple(int(i in S) for i in range(n)) + (1,)))
    G = buchberger(gens, MonomialOrder.grlex(n + 1), max_pairs=max_pairs)
    return not G.is_unit()


@dataclass
class UGBTrial:
    weights: tuple
    s_pairs: Optional[bool] = None
    oracle_in_circuits: Optional[bool] = None
    circuits_in_oracle: Optional[bool] = None
    initial_ideal: Optional[bool] = None
    status: str = "pass"
    note: str = ""

    def finish(self):
        parts = (self.s_pairs, self.oracle_in_circuits, self.circuits_in_oracle, self.initial_ideal)
        if self.status != "inconclusive":
            self.status = "pass" if all(parts) else "fail"
        return self


@dataclass
class UGBReport:
    n: int
    I: tuple
    seed: Optional[int]
    trials: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(t.status != "fail" for t in self.trials)

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "inconclusive": 0}
        for t in self.trials:
            out[t.status] += 1
        return out


def random_weights(n: int, rng: random.Random, lo: int = 1, hi: int = 1000) -> tuple:
    return tuple(rng.sample(range(lo, hi + 1), n))


def monomial_support(f: Poly):
    """Support set of a single-term polynomial, or ``None`` if not a monomial."""
    if not f.is_monomial():
        return None
    m = next(iter(f.terms))
    if any(e > 1 for e in m):
        return None
    return tuple(i for i, e in enumerate(m) if e)


def verify_ugb(A: QMatrix, I: Iterable[int], trials: int = 5, seed: Optional[int] = 0,
               weights: Optional[Sequence[Sequence]] = None, max_pairs: int = DEFAULT_MAX_PAIRS) -> UGBReport:
    """Check that the circuit polynomials are a Groebner basis of the ideal of
    ``inv_I(L)`` for several random positive weight vectors.

    Per trial: (a) every S-polynomial of the circuit polynomials reduces to
    zero under the weight order; (b) every generator of the elimination ideal
    reduces to zero modulo the circuit polynomials; (c) every circuit
    polynomial reduces to zero modulo a Groebner basis of the elimination
    ideal for the same order; (d) the initial forms generate the
    Stanley-Reisner ideal of the semi-broken circuit complex.
    """
    I = frozenset(I)
    n = A.ncols
    M = matroid_from_matrix(A)
    fs = [circuit_polynomial(cf, I) for cf in circuit_forms(A, M)]
    rng = random.Random(seed)
    if weights is None:
        weights = [random_weights(n, rng) for _ in range(trials)]
    report = UGBReport(n, tuple(sorted(I)), seed)
    try:
        oracle = list(inv_ideal_oracle(A, I, max_pairs=max_pairs).gens)
    except ResourceLimitError as exc:
        for w in weights:
            report.trials.append(UGBTrial(tuple(w), status="inconclusive", note=str(exc)))
        return report
    for w in weights:
        w = tuple(w)
        _check_distinct(w)
        if any(x <= 0 for x in w):
            raise PreconditionError("weights must be positive")
        trial = UGBTrial(w)
        order = MonomialOrder.weighted(w)
        try:
            trial.s_pairs = s_pair_criterion(fs, order)
            trial.oracle_in_circuits = all(not normal_form(g, fs, order) for g in oracle)
            Gw = list(buchberger(oracle, order, max_pairs=max_pairs).gens)
            trial.circuits_in_oracle = all(not normal_form(f, Gw, order) for f in fs)
        except ResourceLimitError as exc:
            trial.status, trial.note = "inconclusive", str(exc)
        inits = [monomial_support(initial_form(f, w)) for f in fs]
        if any(s is None for s in inits):
            trial.initial_ideal = False
            trial.note = "an initial form is not a square-free monomial"
        else:
            D = semi_broken_complex(M, I, w)
            trial.initial_ideal = minimal_sets(inits) == sorted(sr_generators(D))
        report.trials.append(trial.finish())
    return report
