"""Command-line front end: ``semispace <subcommand> --input problem.json``.

Every subcommand prints one deterministic JSON document on stdout.  Errors go
to stderr with exit code 2 (malformed input), 3 (violated precondition),
4 (internal inconsistency) or 5 (resource cutoff).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .arrangement import AffineSlice, real_point_census
from .errors import ConsistencyError, GenericityError, SemispaceError
from .invspace import (achievable_supports, affine_hilbert_numerator, degree, support_by_oracle,
                       verify_ugb)
from .jsonio import (ProblemInput, census_to_json, complex_to_json, degree_to_json, dumps,
                     load_problem, matroid_to_json, one_based, poly_to_json, qlist, ugb_to_json)
from .matroid import circuit_forms, loops, matroid_from_matrix
from .poly import circuit_polynomial, initial_form, inv_ideal_oracle
from .scomplex import fh_vectors, i_broken_circuit, semi_broken_complex, sr_generators

SAMPLED_U_ATTEMPTS = 20


def cmd_matroid(p: ProblemInput, args) -> dict:
    M = matroid_from_matrix(p.matrix)
    out = matroid_to_json(M)
    out["circuit_forms"] = [{"circuit": one_based(cf.circuit), "coeffs": qlist(cf.coeffs)}
                            for cf in circuit_forms(p.matrix, M)]
    out["loops"] = one_based(loops(M))
    return out


def cmd_complex(p: ProblemInput, args) -> dict:
    M = matroid_from_matrix(p.matrix)
    D = semi_broken_complex(M, p.I, p.w)
    fh = fh_vectors(D)
    polys = []
    for cf in circuit_forms(p.matrix, M):
        f = circuit_polynomial(cf, p.I)
        polys.append({"circuit": one_based(cf.circuit), "polynomial": poly_to_json(f),
                      "initial_form": poly_to_json(initial_form(f, p.w))})
    return {
        "I": one_based(p.I),
        "w": qlist(p.w),
        "broken_circuits": sorted(one_based(i_broken_circuit(C, p.I, p.w)) for C in M.circuits),
        "complex": complex_to_json(D),
        "f_vector": list(fh.f),
        "h_vector": list(fh.h),
        "stanley_reisner": sorted([e + 1 for e in g] for g in sr_generators(D)),
        "circuit_polynomials": polys,
    }


def cmd_degree(p: ProblemInput, args) -> dict:
    M = matroid_from_matrix(p.matrix)
    rep = degree(M, p.I, p.w)
    out = {"I": one_based(p.I), "degree": degree_to_json(rep),
           "hilbert_numerator": affine_hilbert_numerator(M, p.I, p.w)}
    if not rep.consistent:
        raise ConsistencyError(f"degree routes disagree: {dumps(out)}")
    return out


def cmd_supports(p: ProblemInput, args) -> dict:
    M = matroid_from_matrix(p.matrix)
    sups = achievable_supports(M, p.I)
    out = {"I": one_based(p.I), "supports": [one_based(S) for S in sups], "count": len(sups)}
    if args.oracle:
        gens = list(inv_ideal_oracle(p.matrix, p.I).gens)
        chosen = set(sups)
        bad = []
        for mask in range(1 << p.n):
            S = tuple(e for e in range(p.n) if mask >> e & 1)
            if support_by_oracle(gens, S) != (S in chosen):
                bad.append(one_based(S))
        out["oracle_disagreements"] = sorted(bad)
        if bad:
            raise ConsistencyError(f"support oracle disagrees on {sorted(bad)}")
    return out


def cmd_verify_ugb(p: ProblemInput, args) -> dict:
    rep = verify_ugb(p.matrix, p.I, trials=args.trials, seed=_seed(p, args))
    out = ugb_to_json(rep)
    if not rep.passed:
        raise ConsistencyError(f"Groebner basis check failed: {dumps(out)}")
    return out


def _seed(p: ProblemInput, args) -> int:
    if args.seed is not None:
        return args.seed
    return p.seed if p.seed is not None else 0


def _census(p: ProblemInput, args, recover_points: bool):
    """Run the census; a sampled ``u`` is redrawn until it passes the genericity check."""
    seed = _seed(p, args)
    if p.u is not None:
        u = p.u
        return real_point_census(p.matrix, p.I, u, tol=args.tol, w=p.w, seed=seed,
                                 recover_points=recover_points), u
    last = None
    for k in range(SAMPLED_U_ATTEMPTS):
        u = ProblemInput(p.matrix, p.I, p.w, None, seed + k).u_or_sampled()
        try:
            return real_point_census(p.matrix, p.I, u, tol=args.tol, w=p.w, seed=seed,
                                     recover_points=recover_points), u
        except GenericityError as exc:
            last = exc
    raise last


def _maybe_plot(census, p: ProblemInput, u, path: Optional[str], out: dict):
    if not path:
        return
    from .plotting import plot_section

    slice_ = AffineSlice.from_matrix(p.matrix, u)
    plot_section(census, slice_, path, title="I = {" + ",".join(map(str, one_based(p.I))) + "}")
    out["svg"] = os.path.basename(path)


def cmd_regions(p: ProblemInput, args) -> dict:
    census, u = _census(p, args, recover_points=False)
    out = census_to_json(census, with_points=False)
    _maybe_plot(census, p, u, args.svg, out)
    return out


def cmd_realpoints(p: ProblemInput, args) -> dict:
    census, u = _census(p, args, recover_points=True)
    out = census_to_json(census)
    _maybe_plot(census, p, u, args.svg, out)
    return out


def cmd_report(p: ProblemInput, args) -> dict:
    M = matroid_from_matrix(p.matrix)
    census, u = _census(p, args, recover_points=True)
    out = {
        "problem": p.to_json(),
        "matroid": cmd_matroid(p, args),
        "complex": cmd_complex(p, args),
        "degree": cmd_degree(p, args),
        "supports": [one_based(S) for S in achievable_supports(M, p.I)],
        "groebner": ugb_to_json(verify_ugb(p.matrix, p.I, trials=args.trials, seed=_seed(p, args))),
        "census": census_to_json(census),
    }
    out["problem"]["u"] = qlist(u)
    deg = census.degree.by_facets
    summary = {"degree": deg, "qualifying_regions": len(census.qualifying), "points": len(census.points),
               "max_residual": out["census"]["max_residual"]}
    summary["equal"] = census.counts_agree and census.degree.consistent and census.max_residual < args.residual_tol
    out["summary"] = summary
    svg = args.svg
    if args.outdir:
        os.makedirs(args.outdir, exist_ok=True)
        if svg is None and AffineSlice.from_matrix(p.matrix, u).dim == 2:
            svg = os.path.join(args.outdir, "section.svg")
    _maybe_plot(census, p, u, svg, out)
    if args.outdir:
        with open(os.path.join(args.outdir, "report.json"), "w") as fh:
            fh.write(dumps(out))
    if not out["groebner"]["passed"]:
        raise ConsistencyError("Groebner basis check failed")
    if not summary["equal"]:
        raise ConsistencyError(f"degree {deg}, qualifying regions {summary['qualifying_regions']}, "
                               f"points {summary['points']}, max residual {summary['max_residual']}")
    return out


COMMANDS = {
    "matroid": (cmd_matroid, "circuits and circuit linear forms of the column matroid"),
    "complex": (cmd_complex, "semi-broken circuit complex and circuit polynomials"),
    "degree": (cmd_degree, "degree by facet count, recursion and closed formula"),
    "supports": (cmd_supports, "achievable coordinate supports"),
    "verify-ugb": (cmd_verify_ugb, "check the circuit polynomials form a Groebner basis for random weights"),
    "regions": (cmd_regions, "sign-pattern regions of the translated orthogonal complement"),
    "realpoints": (cmd_realpoints, "one real point per qualifying region via damped Newton"),
    "report": (cmd_report, "full pipeline; fails unless degree = regions = points"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semispace", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--input", required=True, help="problem JSON file")
        sp.add_argument("--svg", help="write a 2-D section plot here (regions, realpoints, report)")
        sp.add_argument("--tol", type=float, default=1e-10, help="Newton tolerance on the projected gradient")
        sp.add_argument("--trials", type=int, default=5, help="random weight vectors for verify-ugb")
        sp.add_argument("--seed", type=int, default=None, help="overrides the seed in the input")
        sp.add_argument("--output", help="also write the JSON here")
        if name == "supports":
            sp.add_argument("--oracle", action="store_true", help="cross-check every subset by elimination")
        if name == "report":
            sp.add_argument("--outdir", help="write report.json and section.svg into this directory")
            sp.add_argument("--residual-tol", type=float, default=1e-8,
                            help="largest accepted circuit-polynomial residual")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        problem = load_problem(args.input)
        out = func(problem, args)
    except SemispaceError as exc:
        print(f"semispace {args.command}: {exc}", file=sys.stderr)
        patterns = getattr(exc, "patterns", ())
        if patterns:
            print("unstable sign patterns: " + ", ".join(patterns), file=sys.stderr)
        return exc.exit_code
    text = dumps(out)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
