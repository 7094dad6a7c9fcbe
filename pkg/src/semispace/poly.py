"""Sparse polynomials over Q, monomial orders, division and Buchberger.

A monomial is a tuple of exponents.  A :class:`Poly` is an immutable mapping
from monomials to nonzero Fractions with a fixed number of variables.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ResourceLimitError
from .exactcore import QMatrix, as_fraction, format_fraction, kernel_basis
from .matroid import CircuitForm

DEFAULT_MAX_PAIRS = 100_000
DEFAULT_MAX_TERMS = 10_000


class Poly:
    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms, nvars: int):
        clean = {}
        for m, c in dict(terms).items():
            m = tuple(m)
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has wrong length for {nvars} variables")
            c = as_fraction(c)
            if c:
                clean[m] = c
        self.terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        return cls({tuple(int(k == i) for k in range(nvars)): 1}, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Poly":
        return cls({tuple(exps): coeff}, len(exps))

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Poly":
        p = object.__new__(cls)
        p.terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return Poly.constant(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_fraction(other)
            if not c:
                return Poly.zero(self.nvars)
            return Poly._raw({m: a * c for m, a in self.terms.items()}, self.nvars)
        other = self._coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Poly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def mul_term(self, mono: tuple, coeff: Fraction) -> "Poly":
        return Poly._raw({tuple(a + b for a, b in zip(m, mono)): c * coeff for m, c in self.terms.items()},
                         self.nvars)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def evaluate(self, point: Sequence):
        """Evaluate at a point; works for Fractions and floats alike."""
        total = 0
        for m, c in self.terms.items():
            t = c if isinstance(point[0], Fraction) else float(c)
            for x, e in zip(point, m):
                if e:
                    t = t * x ** e
            total = total + t
        return total

    def substitute(self, var: int, value) -> "Poly":
        """Set variable ``var`` to a constant (the variable stays in the ring)."""
        value = as_fraction(value)
        out = {}
        for m, c in self.terms.items():
            e = m[var]
            mm = m[:var] + (0,) + m[var + 1:]
            s = out.get(mm, 0) + c * value ** e
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
        return Poly._raw(out, self.nvars)

    def drop_variables(self, keep: Sequence[int]) -> "Poly":
        """Project onto the variables ``keep``; the others must not occur."""
        keep = list(keep)
        out = {}
        for m, c in self.terms.items():
            if any(m[k] for k in range(self.nvars) if k not in keep):
                raise ValueError("polynomial involves a dropped variable")
            out[tuple(m[k] for k in keep)] = c
        return Poly._raw(out, len(keep))

    def embed(self, nvars: int, offset: int = 0) -> "Poly":
        """Place the variables at positions ``offset..offset+self.nvars-1`` of a larger ring."""
        pad_l, pad_r = (0,) * offset, (0,) * (nvars - offset - self.nvars)
        return Poly._raw({pad_l + m + pad_r: c for m, c in self.terms.items()}, nvars)

    def monic(self, order: "MonomialOrder") -> "Poly":
        lc = self.terms[leading_monomial(self, order)]
        return self * (1 / lc)

    def sorted_terms(self, order: Optional["MonomialOrder"] = None) -> list:
        order = order or MonomialOrder.grlex(self.nvars)
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def to_json(self) -> list:
        return [{"exp": list(m), "coef": format_fraction(c)} for m, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data: list, nvars: int) -> "Poly":
        return cls({tuple(t["exp"]): as_fraction(t["coef"]) for t in data}, nvars)

    def pretty(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
            if not mono:
                body = format_fraction(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{format_fraction(abs(c))}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {b}" for s, b in parts[1:])

    def __repr__(self):
        return f"Poly({self.pretty()})"


class MonomialOrder:
    """Total monomial order given by a sort key (bigger key = bigger monomial).

    kinds:
      * ``"lex"``: x1 > x2 > ...
      * ``"grlex"``: total degree, then lex
      * ``"weight"``: ``w``-degree, ties broken by grlex
      * ``"block"``: first ``block`` variables eliminate the rest; grlex inside each block
    """

    def __init__(self, kind: str, nvars: int, weight: Optional[Sequence] = None, block: Optional[int] = None):
        if kind not in ("lex", "grlex", "weight", "block"):
            raise ValueError(f"unknown order kind {kind!r}")
        self.kind = kind
        self.nvars = nvars
        self.weight = None
        self.block = block
        if kind == "weight":
            ws = [as_fraction(x) for x in weight]
            if len(ws) != nvars:
                raise ValueError("weight length mismatch")
            if any(x < 0 for x in ws):
                raise ValueError("weight orders need nonnegative weights")
            # integral weights keep keys as ints (faster comparisons)
            self.weight = tuple(int(x) if x.denominator == 1 else x for x in ws)
        if kind == "block" and not (block is not None and 0 <= block <= nvars):
            raise ValueError("block order needs 0 <= block <= nvars")
        self._cache = {}

    @classmethod
    def lex(cls, nvars):
        return cls("lex", nvars)

    @classmethod
    def grlex(cls, nvars):
        return cls("grlex", nvars)

    @classmethod
    def weighted(cls, weight):
        return cls("weight", len(weight), weight=weight)

    @classmethod
    def elimination(cls, nvars, block):
        return cls("block", nvars, block=block)

    def key(self, m: tuple) -> tuple:
        k = self._cache.get(m)
        if k is None:
            if self.kind == "lex":
                k = m
            elif self.kind == "grlex":
                k = (sum(m),) + m
            elif self.kind == "weight":
                k = (sum(a * b for a, b in zip(self.weight, m)), sum(m)) + m
            else:
                b = self.block
                k = (sum(m[:b]),) + m[:b] + (sum(m[b:]),) + m[b:]
            self._cache[m] = k
        return k

    def neg_key(self, m: tuple) -> tuple:
        return tuple(-x for x in self.key(m))

    def __repr__(self):
        extra = f", weight={list(self.weight)}" if self.weight else ""
        extra += f", block={self.block}" if self.kind == "block" else ""
        return f"MonomialOrder({self.kind!r}, nvars={self.nvars}{extra})"


@dataclass(frozen=True)
class IdealBasis:
    gens: tuple
    nvars: int

    def __post_init__(self):
        if any(g.is_zero() for g in self.gens):
            raise ValueError("zero generator")
        if any(g.nvars != self.nvars for g in self.gens):
            raise ValueError("generator in the wrong ring")

    def is_unit(self) -> bool:
        return any(len(g.terms) == 1 and not any(next(iter(g.terms))) for g in self.gens)


def leading_monomial(f: Poly, order: MonomialOrder) -> tuple:
    return max(f.terms, key=order.key)


def leading_term(f: Poly, order: MonomialOrder):
    m = leading_monomial(f, order)
    return m, f.terms[m]


def divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_div(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _reduce(f: Poly, G: Sequence[Poly], order: MonomialOrder, want_quotients: bool,
            max_terms: int = DEFAULT_MAX_TERMS):
    leads = []
    for g in G:
        m, c = leading_term(g, order)
        leads.append((m, c))
    work = dict(f.terms)
    heap = [(order.neg_key(m), m) for m in work]
    heapq.heapify(heap)
    remainder = {}
    quotients = [dict() for _ in G] if want_quotients else None
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        for k, (lm, lc) in enumerate(leads):
            if divides(lm, m):
                q_m = mono_div(m, lm)
                q_c = c / lc
                if want_quotients:
                    quotients[k][q_m] = quotients[k].get(q_m, 0) + q_c
                for gm, gc in G[k].terms.items():
                    if gm == lm:
                        continue
                    t = tuple(a + b for a, b in zip(gm, q_m))
                    old = work.get(t)
                    new = (0 if old is None else old) - q_c * gc
                    if new:
                        if old is None:
                            heapq.heappush(heap, (order.neg_key(t), t))
                        work[t] = new
                    elif old is not None:
                        del work[t]
                if len(work) > max_terms:
                    raise ResourceLimitError(f"intermediate polynomial exceeds {max_terms} terms")
                break
        else:
            remainder[m] = c
    r = Poly._raw(remainder, f.nvars)
    if want_quotients:
        return [Poly(q, f.nvars) for q in quotients], r
    return r


def divide(f: Poly, G: Sequence[Poly], order: MonomialOrder):
    """Multivariate division: ``f = sum q_i g_i + r`` with no term of ``r``
    divisible by a leading monomial of ``G``.  The first divisor that applies
    (in list order) is always used."""
    if any(g.is_zero() for g in G):
        raise ValueError("cannot divide by the zero polynomial")
    return _reduce(f, G, order, True)


def normal_form(f: Poly, G: Sequence[Poly], order: MonomialOrder, max_terms: int = DEFAULT_MAX_TERMS) -> Poly:
    return _reduce(f, G, order, False, max_terms)


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    mf, cf = leading_term(f, order)
    mg, cg = leading_term(g, order)
    L = mono_lcm(mf, mg)
    return f.mul_term(mono_div(L, mf), 1 / cf) - g.mul_term(mono_div(L, mg), 1 / cg)


def s_pair_criterion(G: Sequence[Poly], order: MonomialOrder) -> bool:
    """True iff every S-polynomial of ``G`` reduces to zero modulo ``G``."""
    G = [g for g in G if g]
    for a in range(len(G)):
        for b in range(a + 1, len(G)):
            if normal_form(s_polynomial(G[a], G[b], order), G, order):
                return False
    return True


def buchberger(B, order: MonomialOrder, max_pairs: int = DEFAULT_MAX_PAIRS,
               max_terms: int = DEFAULT_MAX_TERMS, reduced: bool = True) -> IdealBasis:
    """Groebner basis of the ideal generated by ``B`` (an IdealBasis or list).

    Pairs are processed smallest-lcm first (total degree, then ``order``);
    Buchberger's coprime criterion and the Gebauer-Moeller chain criterion
    discard useless pairs.  Raises :class:`ResourceLimitError` once more than
    ``max_pairs`` S-polynomials have been reduced.
    """
    gens = list(B.gens if isinstance(B, IdealBasis) else B)
    nvars = gens[0].nvars if gens else order.nvars
    polys: list = []
    lms: list = []
    basis: list = []  # indices into polys
    pairs: set = set()

    def update(h: int):
        nonlocal basis, pairs
        lh = lms[h]
        C = list(basis)
        D = []
        while C:
            g = C.pop()
            lg = lms[g]
            lcm_hg = mono_lcm(lh, lg)
            coprime = all(not (a and b) for a, b in zip(lh, lg))
            if coprime or (not any(divides(mono_lcm(lh, lms[g2]), lcm_hg) for g2 in C)
                           and not any(divides(mono_lcm(lh, lms[g2]), lcm_hg) for g2 in D)):
                D.append(g)
        E = [g for g in D if any(a and b for a, b in zip(lh, lms[g]))]
        kept = set()
        for (g1, g2) in pairs:
            L12 = mono_lcm(lms[g1], lms[g2])
            if (not divides(lh, L12) or mono_lcm(lms[g1], lh) == L12 or mono_lcm(lms[g2], lh) == L12):
                kept.add((g1, g2))
        kept.update((g, h) for g in E)
        pairs = kept
        basis = [g for g in basis if not divides(lh, lms[g])] + [h]

    def add(p: Poly):
        p = p.monic(order)
        polys.append(p)
        lms.append(leading_monomial(p, order))
        update(len(polys) - 1)

    # insert generators by increasing leading monomial
    for g in sorted((g for g in gens if g), key=lambda g: order.key(leading_monomial(g, order))):
        r = normal_form(g, [polys[i] for i in basis], order, max_terms)
        if r:
            add(r)
    done = 0
    while pairs:
        pair = min(pairs, key=lambda p: (sum(mono_lcm(lms[p[0]], lms[p[1]])),
                                         order.key(mono_lcm(lms[p[0]], lms[p[1]])), p))
        pairs.discard(pair)
        done += 1
        if done > max_pairs:
            raise ResourceLimitError(f"Buchberger exceeded {max_pairs} S-pairs")
        s = s_polynomial(polys[pair[0]], polys[pair[1]], order)
        r = normal_form(s, [polys[i] for i in basis], order, max_terms)
        if r:
            add(r)
    G = [polys[i] for i in basis]
    if reduced:
        G = reduce_basis(G, order)
    return IdealBasis(tuple(G), nvars)


def reduce_basis(G: Sequence[Poly], order: MonomialOrder) -> list:
    """Reduced Groebner basis from a Groebner basis: drop redundant leading
    terms, make monic, fully interreduce, sort by leading monomial."""
    G = [g.monic(order) for g in G if g]
    lm = [leading_monomial(g, order) for g in G]
    minimal = []
    for i, g in enumerate(G):
        if any(j != i and divides(lm[j], lm[i]) and (lm[j] != lm[i] or j < i) for j in range(len(G))):
            continue
        minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lt = leading_monomial(g, order)
        tail = Poly._raw({m: c for m, c in g.terms.items() if m != lt}, g.nvars)
        out.append(Poly.monomial(lt) + normal_form(tail, others, order))
    return sorted(out, key=lambda g: order.key(leading_monomial(g, order)))


def ideal_contains(G: Sequence[Poly], f: Poly, order: MonomialOrder) -> bool:
    """Membership test; ``G`` must be a Groebner basis for ``order``."""
    return not normal_form(f, G, order)


# ---------------------------------------------------------------------------
# Circuit polynomials and initial forms

def _mono_of(S: Iterable[int], n: int) -> tuple:
    S = set(S)
    return tuple(int(i in S) for i in range(n))


def circuit_polynomial(cf: CircuitForm, I: Iterable[int]) -> Poly:
    """``x^{C & I} * l_C(inv_I(x))``: square-free, one term per element of ``C``."""
    I = frozenset(I)
    n = len(cf.coeffs)
    CI = frozenset(cf.circuit) & I
    terms = {}
    for i in cf.circuit:
        support = CI - {i} if i in I else CI | {i}
        terms[_mono_of(support, n)] = cf.coeffs[i]
    return Poly(terms, n)


def circuit_polynomial_minus(cf: CircuitForm, I: Iterable[int]) -> Poly:
    """Same with ``x_i -> -1/x_i`` on ``I``, multiplied by ``(-1)^{|C & I|} x^{C & I}``."""
    I = frozenset(I)
    n = len(cf.coeffs)
    CI = frozenset(cf.circuit) & I
    sign = -1 if len(CI) % 2 else 1
    terms = {}
    for i in cf.circuit:
        if i in I:
            terms[_mono_of(CI - {i}, n)] = -sign * cf.coeffs[i]
        else:
            terms[_mono_of(CI | {i}, n)] = sign * cf.coeffs[i]
    return Poly(terms, n)


def deg_w(f: Poly, w: Sequence) -> Fraction:
    w = [as_fraction(x) for x in w]
    if f.is_zero():
        raise ValueError("the zero polynomial has no weighted degree")
    return max(sum((a * e for a, e in zip(w, m)), Fraction(0)) for m in f.terms)


def initial_form(f: Poly, w: Sequence) -> Poly:
    """Sum of the terms of maximal ``w``-degree."""
    if f.is_zero():
        return f
    w = [as_fraction(x) for x in w]
    top = deg_w(f, w)
    return Poly._raw({m: c for m, c in f.terms.items()
                      if sum((a * e for a, e in zip(w, m)), Fraction(0)) == top}, f.nvars)


def homogenize(f: Poly) -> Poly:
    """Homogenize with a new variable ``x0`` placed first."""
    if f.is_zero():
        return Poly.zero(f.nvars + 1)
    D = f.total_degree()
    return Poly._raw({(D - sum(m),) + m: c for m, c in f.terms.items()}, f.nvars + 1)


def dehomogenize(f: Poly) -> Poly:
    """Set ``x0 = 1`` and drop it."""
    out = {}
    for m, c in f.terms.items():
        s = out.get(m[1:], 0) + c
        if s:
            out[m[1:]] = s
        else:
            out.pop(m[1:], None)
    return Poly._raw(out, f.nvars - 1)


def inv_ideal_oracle(A: QMatrix, I: Iterable[int], sign: str = "plus",
                     max_pairs: int = DEFAULT_MAX_PAIRS, max_terms: int = DEFAULT_MAX_TERMS) -> IdealBasis:
    """Ideal of the closure of ``inv_I(L)`` (or ``inv_I^-``), ``L`` = row space of ``A``,
    by elimination.

    Ring ``Q[t_1..t_n, x_1..x_n]`` with generators: the linear forms vanishing
    on ``L`` in ``t``; ``x_i t_i - 1`` (``+ 1`` for the minus map) for ``i`` in
    ``I``; ``x_j - t_j`` otherwise.  The ``t`` block is eliminated and the
    reduced Groebner basis of the elimination ideal (grlex in ``x``) is returned.
    """
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    I = frozenset(I)
    n = A.ncols
    N = 2 * n
    gens = []
    for a in kernel_basis(A).rows:
        gens.append(Poly({tuple(int(k == i) for k in range(N)): a[i] for i in range(n) if a[i]}, N))
    for i in range(n):
        t = Poly.var(i, N)
        x = Poly.var(n + i, N)
        if i in I:
            gens.append(x * t + (1 if sign == "minus" else -1))
        else:
            gens.append(x - t)
    order = MonomialOrder.elimination(N, n)
    G = buchberger(gens, order, max_pairs=max_pairs, max_terms=max_terms)
    elim = [g.drop_variables(range(n, N)) for g in G.gens if not any(any(m[:n]) for m in g.terms)]
    return IdealBasis(tuple(elim), n)
