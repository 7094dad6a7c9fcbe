"""Matroids of rational matrices, stored by their circuits.

Elements are 0-based positions ``0..n-1``.  Minors renumber the surviving
elements consecutively; ``labels`` keeps the original label of each position
so that index sets and weight vectors can be carried across deletions and
contractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ConsistencyError
from .exactcore import QMatrix, kernel_basis, rank


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def from_mask(mask: int) -> tuple:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def minimal_sets(sets: Iterable[Iterable[int]]) -> list:
    """Inclusion-minimal members of a family, deduplicated and sorted."""
    masks = sorted({to_mask(s) for s in sets}, key=lambda m: (bin(m).count("1"), from_mask(m)))
    kept = []
    for m in masks:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return sorted(from_mask(m) for m in kept)


@dataclass(frozen=True)
class Matroid:
    n: int
    circuits: tuple
    rank: int
    labels: tuple

    @classmethod
    def from_circuits(cls, n: int, circuits: Iterable[Iterable[int]], labels: Sequence[int] = None) -> "Matroid":
        circs = [tuple(sorted(set(c))) for c in circuits]
        if any(not c for c in circs):
            raise ValueError("the empty set cannot be a circuit")
        if any(e < 0 or e >= n for c in circs for e in c):
            raise ValueError("circuit element out of range")
        canon = minimal_sets(circs)
        if len(canon) != len(set(circs)):
            raise ValueError("circuits must form an antichain")
        masks = [to_mask(c) for c in canon]
        r = _greedy_rank((1 << n) - 1, n, masks)
        labels = tuple(range(n)) if labels is None else tuple(labels)
        return cls(n, tuple(canon), r, labels)

    @property
    def circuit_masks(self) -> tuple:
        return tuple(to_mask(c) for c in self.circuits)

    @property
    def ground(self) -> range:
        return range(self.n)

    def old_to_new(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def is_independent(self, S: Iterable[int]) -> bool:
        m = to_mask(S)
        return not any(c & m == c for c in self.circuit_masks)

    def bases(self) -> list:
        return [B for B in combinations(range(self.n), self.rank) if self.is_independent(B)]

    def is_uniform(self) -> bool:
        if self.rank == self.n:
            return not self.circuits
        return set(self.circuits) == set(combinations(range(self.n), self.rank + 1))

    def __str__(self):
        cs = ", ".join("".join(str(e + 1) for e in c) if self.n < 10 else str([e + 1 for e in c])
                       for c in self.circuits)
        return f"Matroid(n={self.n}, rank={self.rank}, circuits={{{cs}}})"


def _greedy_rank(mask: int, n: int, circuit_masks) -> int:
    indep = 0
    for e in range(n):
        if mask >> e & 1:
            trial = indep | (1 << e)
            if not any(c & trial == c for c in circuit_masks):
                indep = trial
    return bin(indep).count("1")


def matroid_from_matrix(A: QMatrix) -> Matroid:
    """Column matroid of ``A``: circuits are the minimal dependent column sets."""
    n = A.ncols
    found = []
    for size in range(1, n + 1):
        for S in combinations(range(n), size):
            m = to_mask(S)
            if any(c & m == c for c in found):
                continue
            if rank(A.select_columns(S)) < size:
                found.append(m)
    circuits = [from_mask(m) for m in found]
    M = Matroid.from_circuits(n, circuits)
    if M.rank != rank(A):
        raise ConsistencyError("rank from circuits disagrees with matrix rank")
    return M


@dataclass(frozen=True)
class CircuitForm:
    """Linear form ``sum coeffs[i] x_i`` vanishing on the row space, supported on ``circuit``."""

    circuit: tuple
    coeffs: tuple

    def support(self) -> tuple:
        return tuple(i for i, a in enumerate(self.coeffs) if a != 0)


def circuit_forms(A: QMatrix, M: Matroid) -> list:
    """One normalized vanishing form per circuit (lowest-index coefficient = 1)."""
    n = A.ncols
    forms = []
    for C in M.circuits:
        K = kernel_basis(A.select_columns(C))
        if K.nrows != 1:
            raise ConsistencyError(f"circuit {C} has a {K.nrows}-dimensional dependency space")
        v = K.rows[0]
        if any(a == 0 for a in v):
            raise ConsistencyError(f"no kernel vector with support exactly {C}")
        lead = v[0]
        coeffs = [Fraction(0)] * n
        for e, a in zip(C, v):
            coeffs[e] = a / lead
        forms.append(CircuitForm(C, tuple(coeffs)))
    return forms


def rank_of(M: Matroid, S: Iterable[int]) -> int:
    return _greedy_rank(to_mask(S), M.n, M.circuit_masks)


def closure(M: Matroid, S: Iterable[int]) -> tuple:
    S = set(S)
    r = rank_of(M, S)
    return tuple(sorted(S | {e for e in M.ground if e not in S and rank_of(M, S | {e}) == r}))


def is_flat(M: Matroid, S: Iterable[int]) -> bool:
    S = set(S)
    r = rank_of(M, S)
    return all(rank_of(M, S | {e}) > r for e in M.ground if e not in S)


def loops(M: Matroid) -> frozenset:
    return frozenset(c[0] for c in M.circuits if len(c) == 1)


def coloops(M: Matroid) -> frozenset:
    # an element is a coloop iff it lies in no circuit
    covered = set()
    for c in M.circuits:
        covered.update(c)
    return frozenset(e for e in M.ground if e not in covered)


def _shift(c: Iterable[int], i: int) -> tuple:
    return tuple(e - (e > i) for e in c if e != i)


def delete(M: Matroid, i: int) -> Matroid:
    """``M \\ i``.  The surviving elements are renumbered ``0..n-2``."""
    circs = [_shift(c, i) for c in M.circuits if i not in c]
    labels = M.labels[:i] + M.labels[i + 1:]
    return Matroid.from_circuits(M.n - 1, circs, labels)


def contract(M: Matroid, i: int) -> Matroid:
    """``M / i``; contracting a loop is the same as deleting it."""
    if i in loops(M):
        return delete(M, i)
    circs = minimal_sets(_shift(c, i) for c in M.circuits)
    labels = M.labels[:i] + M.labels[i + 1:]
    return Matroid.from_circuits(M.n - 1, circs, labels)


def restrict(M: Matroid, S: Iterable[int]) -> Matroid:
    """``M|_S``: delete everything outside ``S``."""
    S = set(S)
    keep = sorted(S)
    pos = {e: k for k, e in enumerate(keep)}
    circs = [tuple(pos[e] for e in c) for c in M.circuits if set(c) <= S]
    return Matroid.from_circuits(len(keep), circs, [M.labels[e] for e in keep])


def drop_index(S: Iterable[int], i: int) -> frozenset:
    """Transport an element set of ``M`` to a minor that removed element ``i``."""
    return frozenset(_shift(S, i))


def uniform_matroid(d: int, n: int) -> Matroid:
    if d >= n:
        return Matroid.from_circuits(n, [])
    return Matroid.from_circuits(n, combinations(range(n), d + 1))
