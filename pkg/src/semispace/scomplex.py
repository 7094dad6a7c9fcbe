"""Simplicial complexes built from matroid circuits.

Faces are handled internally as bitmasks over vertex positions.  A complex
with no faces at all (the *void* complex) is distinct from ``{emptyset}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import PreconditionError
from .matroid import Matroid, contract, delete, drop_index, loops, coloops


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple
    facets: tuple  # tuple of tuples, each sorted by vertex position

    @classmethod
    def from_facets(cls, vertices: Sequence, facets: Iterable[Iterable]) -> "SimplicialComplex":
        vertices = tuple(vertices)
        pos = {v: k for k, v in enumerate(vertices)}
        masks = {_mask(pos[v] for v in F) for F in facets}
        maximal = [m for m in masks if not any(o != m and o & m == m for o in masks)]
        return cls._from_masks(vertices, maximal)

    @classmethod
    def _from_masks(cls, vertices, masks):
        # lexicographic by vertex position, not by label value
        facets = [tuple(vertices[k] for k in bits) for bits in sorted(_bits(m) for m in masks)]
        return cls(vertices, tuple(facets))

    @classmethod
    def void(cls, vertices: Sequence) -> "SimplicialComplex":
        return cls(tuple(vertices), ())

    @property
    def is_void(self) -> bool:
        return not self.facets

    def _pos(self):
        return {v: k for k, v in enumerate(self.vertices)}

    def facet_masks(self) -> list:
        pos = self._pos()
        return [_mask(pos[v] for v in F) for F in self.facets]

    def contains(self, face: Iterable) -> bool:
        pos = self._pos()
        face = list(face)
        if any(v not in pos for v in face):
            return False
        m = _mask(pos[v] for v in face)
        return any(F & m == m for F in self.facet_masks())

    def dimension(self) -> int:
        return max((len(F) for F in self.facets), default=0) - 1

    def is_pure(self) -> bool:
        return len({len(F) for F in self.facets}) <= 1

    def faces(self) -> list:
        """All faces, as tuples, grouped by increasing size."""
        seen = set()
        for F in self.facet_masks():
            sub = F
            while True:
                seen.add(sub)
                if sub == 0:
                    break
                sub = (sub - 1) & F
        return [tuple(self.vertices[k] for k in _bits(m))
                for m in sorted(seen, key=lambda m: (bin(m).count("1"), _bits(m)))]

    def relabel(self, mapping) -> "SimplicialComplex":
        return SimplicialComplex.from_facets([mapping[v] for v in self.vertices],
                                             [[mapping[v] for v in F] for F in self.facets])


@dataclass(frozen=True)
class FHVectors:
    f: tuple  # (f_{-1}, ..., f_{d-1})
    h: tuple  # (h_0, ..., h_d)


def _mask(positions: Iterable[int]) -> int:
    m = 0
    for p in positions:
        m |= 1 << p
    return m


def _bits(m: int) -> tuple:
    out, i = [], 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def facets_from_nonfaces(nvertices: int, nonfaces: Iterable[int]) -> list:
    """Maximal vertex sets (bitmasks) containing no member of ``nonfaces``."""
    nonfaces = list(set(nonfaces))
    if any(nf == 0 for nf in nonfaces):
        return []
    by_vertex = [[nf for nf in nonfaces if nf >> v & 1] for v in range(nvertices)]

    def can_add(S, v):
        T = S | (1 << v)
        return not any(nf & T == nf for nf in by_vertex[v])

    facets = []
    # depth-first over faces, adding vertices in increasing order
    stack = [(0, 0)]
    while stack:
        S, start = stack.pop()
        if all(S >> v & 1 or not can_add(S, v) for v in range(nvertices)):
            facets.append(S)
        for v in range(nvertices - 1, start - 1, -1):
            if not S >> v & 1 and can_add(S, v):
                stack.append((S | (1 << v), v + 1))
    return facets


def _check_distinct(w: Sequence, what: str = "weight vector"):
    if len(set(w)) != len(w):
        raise PreconditionError(f"{what} must have pairwise distinct coordinates, got {list(w)}")


def i_broken_circuit(C: Iterable[int], I: Iterable[int], w: Sequence) -> frozenset:
    """``C - min(C)`` if ``C`` lies in ``I``, else ``(C & I) + max(C - I)``; order by ``w``."""
    _check_distinct(w)
    C, I = frozenset(C), frozenset(I)
    if not C:
        raise ValueError("circuit must be nonempty")
    key = lambda e: w[e]
    if C <= I:
        return C - {min(C, key=key)}
    return (C & I) | {max(C - I, key=key)}


def semi_broken_complex(M: Matroid, I: Iterable[int], w: Sequence) -> SimplicialComplex:
    """Subsets of the ground set containing no I-broken circuit."""
    _check_distinct(w)
    I = frozenset(I)
    if len(w) != M.n:
        raise ValueError("weight vector length must equal the ground set size")
    if I & loops(M):
        return SimplicialComplex.void(range(M.n))
    broken = {_mask(i_broken_circuit(C, I, w)) for C in M.circuits}
    return SimplicialComplex._from_masks(tuple(range(M.n)), facets_from_nonfaces(M.n, broken))


def facet_count_recursive(M: Matroid, I: Iterable[int], w: Sequence) -> int:
    """Facet count of the semi-broken circuit complex via deletion-contraction on ``max_w(I)``."""
    _check_distinct(w)
    I = frozenset(I)
    if not I:
        return 1
    i = max(I, key=lambda e: w[e])
    if i in loops(M):
        return 0
    rest = drop_index(I - {i}, i)
    w_minor = tuple(w[:i]) + tuple(w[i + 1:])
    below = facet_count_recursive(contract(M, i), rest, w_minor)
    if i in coloops(M):
        return below
    return facet_count_recursive(delete(M, i), rest, w_minor) + below


def cone(D: SimplicialComplex, v) -> SimplicialComplex:
    if v in D.vertices:
        raise ValueError(f"cone vertex {v!r} already present")
    return SimplicialComplex.from_facets(D.vertices + (v,), [F + (v,) for F in D.facets])


def link(D: SimplicialComplex, sigma: Iterable) -> SimplicialComplex:
    sigma = set(sigma)
    if not D.contains(sigma):
        raise ValueError(f"{sorted(sigma, key=str)} is not a face")
    verts = [v for v in D.vertices if v not in sigma]
    facets = [[v for v in F if v not in sigma] for F in D.facets if sigma <= set(F)]
    return SimplicialComplex.from_facets(verts, facets)


def fh_vectors(D: SimplicialComplex) -> FHVectors:
    if D.is_void:
        return FHVectors((), ())
    d = D.dimension() + 1
    f = [0] * (d + 1)
    for F in D.faces():
        f[len(F)] += 1
    h = [sum((-1) ** (k - i) * comb(d - i, k - i) * f[i] for i in range(k + 1)) for k in range(d + 1)]
    return FHVectors(tuple(f), tuple(h))


def sr_generators(D: SimplicialComplex) -> list:
    """Minimal non-faces, as vertex tuples."""
    if D.is_void:
        return [()]
    nv = len(D.vertices)
    fm = D.facet_masks()
    top = max(bin(F).count("1") for F in fm) + 1
    found = []
    for size in range(1, min(top, nv) + 1):
        for S in combinations(range(nv), size):
            m = _mask(S)
            if any(g & m == g for g in found):
                continue
            if not any(F & m == m for F in fm):
                found.append(m)
    return [tuple(D.vertices[k] for k in _bits(m)) for m in found]


def x_vertex(i: int) -> tuple:
    return ("x", i)


def y_vertex(i: int) -> tuple:
    return ("y", i)


def external_activity_complex(M: Matroid, u: Sequence) -> SimplicialComplex:
    """Complex on ``x_0..x_{n-1}, y_0..y_{n-1}`` with minimal non-faces
    ``x_{min C} y_{C - min C}`` (minimum taken in the ``u`` order)."""
    _check_distinct(u, "u")
    n = M.n
    verts = tuple(x_vertex(i) for i in range(n)) + tuple(y_vertex(i) for i in range(n))
    nonfaces = []
    for C in M.circuits:
        lo = min(C, key=lambda e: u[e])
        nonfaces.append((1 << lo) | _mask(n + e for e in C if e != lo))
    return SimplicialComplex._from_masks(verts, facets_from_nonfaces(2 * n, nonfaces))


def link_weights(I: Iterable[int], w: Sequence) -> tuple:
    I = frozenset(I)
    return tuple(w[i] if i in I else -w[i] for i in range(len(w)))


def activity_link(M: Matroid, I: Iterable[int], w: Sequence) -> SimplicialComplex:
    """Link of ``x_I y_{[n]-I}`` in the external activity complex, with vertices
    renamed to ground-set elements (``x_j -> j`` off ``I``, ``y_i -> i`` on ``I``)."""
    I = frozenset(I)
    if any(x <= 0 for x in w):
        raise PreconditionError("the link construction needs a strictly positive weight vector")
    if I & loops(M):
        raise PreconditionError("the link construction needs no loops in I")
    B = external_activity_complex(M, link_weights(I, w))
    sigma = [x_vertex(i) for i in sorted(I)] + [y_vertex(j) for j in range(M.n) if j not in I]
    L = link(B, sigma)
    return SimplicialComplex.from_facets(range(M.n), [[v[1] for v in F] for F in L.facets])


def verify_link_isomorphism(M: Matroid, I: Iterable[int], w: Sequence) -> bool:
    I = frozenset(I)
    try:
        L = activity_link(M, I, w)
    except ValueError as exc:
        if isinstance(exc, PreconditionError):
            raise
        return False  # the face x_I y_{[n]-I} is missing
    D = semi_broken_complex(M, I, w)
    return set(map(frozenset, L.facets)) == set(map(frozenset, D.facets))
