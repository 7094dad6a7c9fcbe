"""JSON encoding of problems and results.

External labels are 1-based and rationals are strings ``"p/q"`` (``"p"`` when
``q = 1``).  Floats appear only for numerically recovered points.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InputError, PreconditionError
from .exactcore import QMatrix, as_fraction, format_fraction
from .matroid import Matroid
from .poly import Poly
from .scomplex import SimplicialComplex


def dumps(obj) -> str:
    """Deterministic serialization (sorted keys, fixed indentation)."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def qlist(v) -> list:
    return [format_fraction(Fraction(x)) for x in v]


def one_based(S) -> list:
    return [e + 1 for e in sorted(S)]


@dataclass(frozen=True)
class ProblemInput:
    matrix: QMatrix
    I: frozenset
    w: tuple
    u: Optional[tuple]
    seed: Optional[int]

    @property
    def n(self) -> int:
        return self.matrix.ncols

    def u_or_sampled(self) -> tuple:
        """``u`` if given, else random small rationals drawn from the seed."""
        if self.u is not None:
            return self.u
        rng = random.Random(self.seed if self.seed is not None else 0)
        return tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(self.n))

    def to_json(self) -> dict:
        out = {"matrix": [qlist(r) for r in self.matrix.rows], "I": one_based(self.I), "w": qlist(self.w)}
        if self.u is not None:
            out["u"] = qlist(self.u)
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _rational(x, where):
    try:
        return as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {x!r} is not a rational number") from exc


def _vector(data, n, where):
    if not isinstance(data, list) or len(data) != n:
        raise InputError(f"{where} must be a list of {n} rationals")
    return tuple(_rational(x, where) for x in data)


def parse_problem(data) -> ProblemInput:
    if not isinstance(data, dict):
        raise InputError("problem must be a JSON object")
    rows = data.get("matrix")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) and r for r in rows):
        raise InputError("'matrix' must be a nonempty list of nonempty rows")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise InputError("'matrix' rows have different lengths")
    A = QMatrix(tuple(tuple(_rational(x, "matrix") for x in r) for r in rows), n)
    I_raw = data.get("I", [])
    if not isinstance(I_raw, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in I_raw):
        raise InputError("'I' must be a list of integers")
    if any(i < 1 or i > n for i in I_raw) or len(set(I_raw)) != len(I_raw):
        raise InputError(f"'I' must list distinct elements of 1..{n}")
    w = _vector(data["w"], n, "'w'") if data.get("w") is not None else tuple(Fraction(k) for k in range(1, n + 1))
    if len(set(w)) != n:
        raise PreconditionError(f"'w' must have pairwise distinct entries, got {[format_fraction(x) for x in w]}")
    u = _vector(data["u"], n, "'u'") if data.get("u") is not None else None
    seed = data.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise InputError("'seed' must be an integer")
    return ProblemInput(A, frozenset(i - 1 for i in I_raw), w, u, seed)


def load_problem(path: str) -> ProblemInput:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return parse_problem(data)


# ---------------------------------------------------------------------------
# Results

def matroid_to_json(M: Matroid) -> dict:
    return {"n": M.n, "rank": M.rank, "circuits": [one_based(C) for C in M.circuits]}


def matroid_from_json(data: dict) -> Matroid:
    return Matroid.from_circuits(data["n"], [[e - 1 for e in C] for C in data["circuits"]])


def vertex_label(v):
    if isinstance(v, tuple):
        return f"{v[0]}{v[1] + 1}"
    return v + 1


def vertex_from_label(s):
    if isinstance(s, str):
        return (s[0], int(s[1:]) - 1)
    return s - 1


def complex_to_json(D: SimplicialComplex) -> dict:
    return {"vertices": [vertex_label(v) for v in D.vertices],
            "facets": [[vertex_label(v) for v in F] for F in D.facets]}


def complex_from_json(data: dict) -> SimplicialComplex:
    verts = [vertex_from_label(v) for v in data["vertices"]]
    return SimplicialComplex.from_facets(verts, [[vertex_from_label(v) for v in F] for F in data["facets"]])


def poly_to_json(f: Poly) -> dict:
    return {"terms": f.to_json(), "pretty": f.pretty()}


def poly_from_json(data: dict, nvars: int) -> Poly:
    return Poly.from_json(data["terms"], nvars)


def degree_to_json(rep) -> dict:
    return {"by_facets": rep.by_facets, "by_recursion": rep.by_recursion, "by_formula": rep.by_formula,
            "hilbert_h": list(rep.hilbert_h), "consistent": rep.consistent}


def ugb_to_json(rep) -> dict:
    return {
        "n": rep.n, "I": one_based(rep.I), "seed": rep.seed, "passed": rep.passed, "counts": rep.counts(),
        "trials": [{"weights": list(t.weights), "s_pairs": t.s_pairs, "oracle_in_circuits": t.oracle_in_circuits,
                    "circuits_in_oracle": t.circuits_in_oracle, "initial_ideal": t.initial_ideal,
                    "status": t.status, "note": t.note} for t in rep.trials],
    }


def _finite(x):
    return None if x is None or not math.isfinite(x) else float(x)


def region_to_json(r) -> dict:
    return {
        "pattern": r.pattern.label(),
        "witness": qlist(r.witness),
        "lambda": qlist(r.lam),
        "recession_trivial": r.recession_trivial,
        "point": None if r.real_point is None else [float(v) for v in r.real_point],
        "residual": _finite(r.residual),
        "iterations": r.iterations,
    }


def census_to_json(c, with_points: bool = True) -> dict:
    out = {
        "I": one_based(c.I),
        "u": qlist(c.u),
        "total_regions": c.total_regions,
        "qualifying_regions": len(c.qualifying),
        "regions": [region_to_json(r) for r in c.regions],
        "degree": degree_to_json(c.degree),
    }
    if with_points:
        out.update({"points": len(c.points), "max_residual": _finite(c.max_residual),
                    "min_separation": _finite(c.min_separation), "counts_agree": c.counts_agree})
    return out
