"""Command-line entry point.

Every command prints line-delimited JSON (``dist`` without ``--json`` prints
``key=value`` lines).  Exit codes: 0 success, 1 usage or input error,
2 failed checks, 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .additivity import DEFAULT_BUDGET, find_witness
from .circuit import parse_circuit, random_point, serialize_circuit, simplex_power_construction, zonotope
from .distances import distance_report
from .errors import BudgetExhausted, SgaugeError
from .geometry import Simplex, parse_vector, reference_simplex
from .polytope import Polytope, h_to_v, load_hpolytope, load_vpolytope, membership, prune_vertices, v_to_h
from .sphere import estimate_gap, paper_simplex_circuit
from .suites import GRID_BOUND, SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(obj, out=None):
    line = json.dumps(obj, separators=(",", ":"))
    print(line, file=out or sys.stdout)


def _cmd_dist(args) -> int:
    P = parse_circuit(_read(args.circuit))
    if args.simplex:
        S = Simplex(load_vpolytope(_read(args.simplex)).vertices)
    else:
        S = reference_simplex(P.dim)
    obj = distance_report(S, P).to_obj()
    if args.json:
        _emit(obj)
    else:
        for k, v in obj.items():
            print(f"{k}={json.dumps(v, separators=(',', ':')) if isinstance(v, list) else v}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    out = open(args.out, "w", encoding="utf-8") if args.out else None
    try:
        for name in names:
            d = args.d
            if name == "depth" and d is None:
                if args.suite == "depth" or args.n.bit_length() <= 1:
                    if args.suite == "depth":
                        raise UsageError("--d is required for the depth suite")
                    _emit({"suite": name, "skipped": "no depth d with 0 < d < ceil(log2(n+1))"})
                    continue
                d = 1
            report = run_suite(name, args.n, args.trials, args.seed,
                               d=d if name == "depth" else None, grid_bound=args.grid_bound)
            ok &= report.ok
            summary = report.to_obj()
            summary["failures"] = len(report.failures)
            summary["extras"] = {k: v.verdict for k, v in report.extras.items()}
            summary["ok"] = report.ok
            _emit(summary)
            if out:
                _emit(report.to_obj(), out)
    finally:
        if out:
            out.close()
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_construct(args) -> int:
    if args.kind == "simplex-power":
        if args.d is None:
            raise UsageError("--d is required for simplex-power")
        P = simplex_power_construction(args.n, args.d)
    elif args.kind == "paper-simplex":
        P = paper_simplex_circuit(args.n)
    else:
        gens = []
        for seg in args.segment or []:
            a, sep, b = seg.partition(":")
            if not sep:
                raise UsageError(f"segment {seg!r} must look like 'a1,..,an:b1,..,bn'")
            gens.append((parse_vector(a), parse_vector(b)))
        if args.random:
            rng = np.random.default_rng(args.seed)
            for _ in range(args.random):
                gens.append((random_point(rng, args.n, args.grid_bound), random_point(rng, args.n, args.grid_bound)))
        if not gens:
            raise UsageError("zonotope needs --segment or --random")
        P = zonotope(gens)
    text = serialize_circuit(P)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _cmd_additivity(args) -> int:
    V = prune_vertices(load_vpolytope(_read(args.body_v)))
    if args.body_h:
        H = load_hpolytope(_read(args.body_h))
        if H.dim != V.dim:
            raise UsageError("V and H descriptions have different dimensions")
        if set(h_to_v(H).vertices) != set(V.vertices):
            raise UsageError("V and H descriptions do not describe the same polytope")
    else:
        H = v_to_h(V)
    K = Polytope(V, H)
    try:
        w = find_witness(K, args.budget)
    except BudgetExhausted as exc:
        _emit({"witness": None, "status": "budget exhausted", "scanned": exc.scanned})
        return EXIT_BUDGET
    if w is None:
        _emit({"witness": None, "status": "none found"})
    else:
        _emit({"witness": w.to_obj(), "status": "found"})
    return EXIT_OK


def _cmd_sphere(args) -> int:
    P = parse_circuit(_read(args.p))
    Q = parse_circuit(_read(args.q))
    _emit(estimate_gap(P, Q, args.samples, args.seed).to_obj())
    return EXIT_OK


def _cmd_membership(args) -> int:
    P = parse_circuit(_read(args.circuit))
    print("true" if membership(P, parse_vector(args.point)).member else "false")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sgauge", description="Exact distances between polytope circuits and the simplex.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dist", help="distance report of a circuit to a simplex")
    s.add_argument("--circuit", required=True)
    s.add_argument("--simplex", help="V-polytope file with n+1 vertices (default: reference simplex)")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=_cmd_dist)

    s = sub.add_parser("verify", help="run randomized verification suites")
    s.add_argument("--suite", required=True, choices=[*SUITES, "all"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--grid-bound", type=int, default=GRID_BOUND)
    s.add_argument("--out", help="write full reports (with failing instances) here")
    s.set_defaults(run=_cmd_verify)

    s = sub.add_parser("construct", help="write a circuit file")
    s.add_argument("--kind", required=True, choices=["simplex-power", "zonotope", "paper-simplex"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int)
    s.add_argument("--segment", action="append", help="zonotope generator 'a1,..,an:b1,..,bn' (repeatable)")
    s.add_argument("--random", type=int, default=0, help="add this many random zonotope generators")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--grid-bound", type=int, default=GRID_BOUND)
    s.add_argument("--out")
    s.set_defaults(run=_cmd_construct)

    s = sub.add_parser("additivity", help="search for an outer-additivity violation")
    s.add_argument("--body-v", required=True)
    s.add_argument("--body-h", help="H-polytope file (default: computed from the vertices)")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(run=_cmd_additivity)

    s = sub.add_parser("sphere", help="Monte Carlo support-function gap")
    s.add_argument("--p", required=True)
    s.add_argument("--q", required=True)
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(run=_cmd_sphere)

    s = sub.add_parser("membership", help="exact point-in-circuit test")
    s.add_argument("--circuit", required=True)
    s.add_argument("--point", required=True, help="comma-separated rationals")
    s.set_defaults(run=_cmd_membership)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, SgaugeError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"sgauge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
