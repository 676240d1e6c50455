"""Seeded randomized suites that check the distance identities and inequalities exactly.

Each trial draws its own generator from ``(seed, trial)``, stores the sampled
circuits in serialized form, and evaluates them with a pure function keyed by
name.  A stored :class:`TrialLog` can therefore be replayed on its own.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial, reduce

import numpy as np

from .circuit import (
    Circuit,
    Point,
    depth,
    from_obj,
    hull,
    hull_union,
    minkowski_sum,
    random_circuit,
    random_point,
    simplex_power_construction,
    to_obj,
    union_all,
    zonotope,
)
from .distances import (
    distance_report,
    de_inf_profile,
    empty_corners,
    negative_envelope,
)
from .errors import PreconditionError
from .geometry import (
    ONE,
    ZERO,
    Q,
    add,
    affine_rank,
    format_rational,
    reference_simplex,
    scale,
    sub,
)
from .polytope import membership

GRID_BOUND = 8
DEINF_SCALES = (Q(1), Q("3/2"), Q(2), Q(4))


# --- reports -------------------------------------------------------------------

@dataclass
class TrialLog:
    """One evaluated instance: what was checked, the values, and what failed."""

    check: str
    trial: int
    instance: dict
    quantities: dict
    violations: list

    @property
    def verdict(self) -> bool:
        return not self.violations

    def to_obj(self) -> dict:
        return {
            "check": self.check,
            "trial": self.trial,
            "instance": self.instance,
            "quantities": self.quantities,
            "violations": self.violations,
            "verdict": "pass" if self.verdict else "fail",
        }

    @classmethod
    def from_obj(cls, obj) -> "TrialLog":
        return cls(obj["check"], obj["trial"], obj["instance"], obj["quantities"], list(obj["violations"]))


@dataclass
class SuiteReport:
    suite: str
    params: dict
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0 and all(log.verdict for log in self.extras.values())

    def to_obj(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "failed": self.failed,
            "failures": [f.to_obj() for f in self.failures],
            "extras": {k: v.to_obj() for k, v in self.extras.items()},
            "wall_time": round(self.wall_time, 3),
        }


def replay(log: TrialLog) -> TrialLog:
    """Re-evaluate a logged instance from its serialization alone."""
    quantities, violations = EVALUATORS[log.check](log.instance)
    return TrialLog(log.check, log.trial, log.instance, quantities, violations)


# --- random bodies ---------------------------------------------------------------

def _hull_body(n, rng, grid_bound, full_dim):
    lo = max(3, n + 1) if full_dim else 3
    hi = max(8, lo)
    while True:
        k = int(rng.integers(lo, hi + 1))
        pts = list(dict.fromkeys(random_point(rng, n, grid_bound) for _ in range(k)))
        if len(pts) >= 2 and (not full_dim or affine_rank(pts) == n):
            return hull(pts)


def random_body(n: int, rng: np.random.Generator, grid_bound: int = GRID_BOUND, full_dim: bool = True) -> Circuit:
    """Balanced hull of 3 to 8 grid points, Minkowski-summed with a second one a third of the time."""
    body = _hull_body(n, rng, grid_bound, full_dim)
    if rng.random() < 1 / 3:
        body = minkowski_sum([body, _hull_body(n, rng, grid_bound, full_dim)])
    return body


def random_symmetric_body(n: int, rng: np.random.Generator, grid_bound: int = GRID_BOUND) -> Circuit:
    """A random zonotope, or the hull of a point set closed under reflection through a random center."""
    if rng.random() < 0.5:
        k = int(rng.integers(1, n + 3))
        gens = []
        while len(gens) < k:
            a, b = random_point(rng, n, grid_bound), random_point(rng, n, grid_bound)
            if a != b:
                gens.append((a, b))
        return zonotope(gens)
    center = random_point(rng, n, grid_bound)
    k = int(rng.integers(1, 5))
    pts = []
    while len(pts) < k:
        p = random_point(rng, n, grid_bound)
        if p != center:
            pts.append(p)
    mirrored = [sub(scale(2, center), p) for p in pts]
    return Circuit(n, union_all([Point(p) for p in dict.fromkeys(pts + mirrored)]))


def random_simplex_homothet(n: int, rng: np.random.Generator, grid_bound: int = GRID_BOUND) -> Circuit:
    S = reference_simplex(n)
    lam = Q(int(rng.integers(1, grid_bound + 1))) / int(rng.integers(1, grid_bound + 1))
    t = random_point(rng, n, grid_bound)
    return hull([add(t, scale(lam, v)) for v in S.vertices])


# --- evaluators ------------------------------------------------------------------

def _f(x):
    if isinstance(x, (tuple, list)):
        return [_f(y) for y in x]
    return None if x is None else format_rational(x)


def _violations(checks: dict) -> list:
    return [name for name, ok in checks.items() if not ok]


def _eval_sum(inst):
    n = inst["n"]
    S = reference_simplex(n)
    parts = [from_obj(o) for o in inst["operands"]]
    reps = [distance_report(S, P) for P in parts]
    rep = distance_report(S, minkowski_sum(parts))
    corner_sums = tuple(sum((r.corners[v] for r in reps), ZERO) for v in range(n + 1))
    checks = {
        "lambda_outer additive": rep.lambda_outer == sum((r.lambda_outer for r in reps), ZERO),
        "outer simplex additive": rep.outer_homothet == reduce(lambda a, b: a + b, (r.outer_homothet for r in reps)),
        "corners additive": rep.corners == corner_sums,
        "d_io at least max": rep.d_io >= max(r.d_io for r in reps),
        "co_d_e at most max": rep.co_d_e <= max(r.co_d_e for r in reps),
        "d_e between min and max": min(r.d_e for r in reps) <= rep.d_e <= max(r.d_e for r in reps),
    }
    q = {"sum": rep.to_obj(), "operands": [r.to_obj() for r in reps]}
    return q, _violations(checks)


def _eval_union(inst):
    n = inst["n"]
    S = reference_simplex(n)
    L1, L2 = from_obj(inst["operands"][0]), from_obj(inst["operands"][1])
    rep = distance_report(S, hull_union(L1, L2), inner=False)
    r1, r2 = distance_report(S, L1, inner=False), distance_report(S, L2, inner=False)
    H = rep.outer_homothet
    c1, _ = empty_corners(S, H, L1)
    c2, _ = empty_corners(S, H, L2)
    checks = {
        "corners are the min": rep.corners == tuple(min(a, b) for a, b in zip(c1, c2)),
        "co_d_e subadditive": rep.co_d_e <= r1.co_d_e + r2.co_d_e,
    }
    q = {
        "union": rep.to_obj(),
        "operands": [r1.to_obj(), r2.to_obj()],
        "operand_corners_in_union_outer": [_f(c1), _f(c2)],
    }
    return q, _violations(checks)


def _eval_symmetric(inst):
    n = inst["n"]
    rep = distance_report(reference_simplex(n), from_obj(inst["body"]), inner=False)
    return {"body": rep.to_obj()}, _violations({"d_e equals n-1": rep.d_e == n - 1})


def _eval_depth(inst):
    n, d = inst["n"], inst["d"]
    P = from_obj(inst["body"])
    rep = distance_report(reference_simplex(n), P, inner=False)
    checks = {
        "depth within bound": depth(P) <= d,
        "d_e at least n+1-2^d": rep.d_e >= n + 1 - 2**d,
    }
    return {"depth": depth(P), "body": rep.to_obj()}, _violations(checks)


def _eval_depth_construction(inst):
    n, d = inst["n"], inst["d"]
    rep = distance_report(reference_simplex(n), simplex_power_construction(n, d), inner=False)
    return {"body": rep.to_obj()}, _violations({"d_e equals n+1-2^d": rep.d_e == n + 1 - 2**d})


def _normalized_report(inst):
    n = inst["n"]
    S = reference_simplex(n)
    L = from_obj(inst["body"])
    lam = distance_report(S, L, inner=False).lambda_outer
    return n, distance_report(S, L.scaled(ONE / lam))


def _eval_ioe(inst):
    n, rep = _normalized_report(inst)
    ratio = rep.lambda_inner / rep.lambda_outer
    checks = {
        "lambda_outer normalized": rep.lambda_outer == 1,
        "d_e at most n d_io": rep.d_e <= n * rep.d_io,
        "d_e at least d_io": rep.d_e >= rep.d_io,
        "d_e at most n(1 - inner/outer)": rep.d_e <= n * (1 - ratio),
        "d_e + inner/outer at least 1": rep.d_e + ratio >= 1,
    }
    return {"body": rep.to_obj()}, _violations(checks)


def _eval_ioe_upper_tight(inst):
    n, rep = _normalized_report(inst)
    ratio = rep.lambda_inner / rep.lambda_outer
    checks = {
        "d_e equals n d_io": rep.d_e == n * rep.d_io,
        "d_e equals n(1 - inner/outer)": rep.d_e == n * (1 - ratio),
    }
    return {"body": rep.to_obj()}, _violations(checks)


def _eval_ioe_lower_tight(inst):
    n, rep = _normalized_report(inst)
    ratio = rep.lambda_inner / rep.lambda_outer
    checks = {
        "d_e equals d_io": rep.d_e == rep.d_io,
        "d_e + inner/outer equals 1": rep.d_e + ratio == 1,
    }
    return {"body": rep.to_obj()}, _violations(checks)


def _eval_deinf(inst):
    n = inst["n"]
    S = reference_simplex(n)
    L = from_obj(inst["body"])
    rep = distance_report(S, L, inner=False)
    m = rep.slope_m
    profile = de_inf_profile(S, L, DEINF_SCALES)
    ratios = [r for _, r in profile]
    env = negative_envelope(S, L)
    tri = distance_report(S, from_obj(inst["homothet"]), inner=False)
    checks = {
        "profile is affine in 1-1/k": all(r == rep.d_e + m * (1 - 1 / k) for k, r in profile),
        "slope positive": m > 0,
        "profile increasing": all(a < b for a, b in zip(ratios, ratios[1:])),
        "profile at k=1 is d_e": ratios[0] == rep.d_e,
        "slope from negative envelope": env.coefficient / rep.lambda_outer == m,
        "simplex homothet slope is n": tri.slope_m == n,
    }
    q = {
        "body": rep.to_obj(),
        "profile": [[_f(k), _f(r)] for k, r in profile],
        "envelope_coefficient": _f(env.coefficient),
        "homothet_slope": _f(tri.slope_m),
    }
    return q, _violations(checks)


def is_negative_homothet(L: Circuit) -> bool:
    """True iff ``L`` equals ``x - c S`` for some ``c > 0`` (S the reference simplex)."""
    env = negative_envelope(reference_simplex(L.dim), L)
    return env.coefficient > 0 and all(membership(L, w).member for w in env.vertices)


def _eval_negative(inst):
    n = inst["n"]
    L = from_obj(inst["body"])
    rep = distance_report(reference_simplex(n), L, inner=False)
    bound = n - ONE / n
    if is_negative_homothet(L):
        checks = {"negative simplex attains n-1/n": rep.d_e == bound}
    else:
        checks = {"d_e below n-1/n": rep.d_e < bound}
    return {"body": rep.to_obj()}, _violations(checks)


EVALUATORS = {
    "sum": _eval_sum,
    "union": _eval_union,
    "symmetric": _eval_symmetric,
    "depth": _eval_depth,
    "depth-construction": _eval_depth_construction,
    "ioe": _eval_ioe,
    "ioe-upper-tight": _eval_ioe_upper_tight,
    "ioe-lower-tight": _eval_ioe_lower_tight,
    "deinf": _eval_deinf,
    "negative": _eval_negative,
}


# --- samplers --------------------------------------------------------------------

def _sample_sum(n, rng, p):
    m = int(rng.integers(2, 4))
    return {"n": n, "operands": [to_obj(random_body(n, rng, p["grid_bound"])) for _ in range(m)]}


def _sample_union(n, rng, p):
    return {"n": n, "operands": [to_obj(random_body(n, rng, p["grid_bound"])) for _ in range(2)]}


def _sample_symmetric(n, rng, p):
    return {"n": n, "body": to_obj(random_symmetric_body(n, rng, p["grid_bound"]))}


def _sample_depth(n, rng, p):
    seed = int(rng.integers(0, 2**63))
    body = random_circuit(n, p["d"], p["grid_bound"], seed)
    return {"n": n, "d": p["d"], "body": to_obj(body)}


def _sample_body(n, rng, p):
    return {"n": n, "body": to_obj(random_body(n, rng, p["grid_bound"]))}


def _sample_deinf(n, rng, p):
    inst = _sample_body(n, rng, p)
    inst["homothet"] = to_obj(random_simplex_homothet(n, rng, p["grid_bound"]))
    return inst


def _extras_depth(n, p):
    inst = {"n": n, "d": p["d"]}
    return {"construction": _logged("depth-construction", -1, inst)}


def _extras_ioe(n, p):
    S = reference_simplex(n)
    neg = hull([scale(Q(-1) / n, v) for v in S.vertices])
    v = S.vertices
    a = add(v[0], scale(Q("1/4"), sub(v[1], v[0])))
    b = add(v[0], scale(Q("3/4"), sub(v[1], v[0])))
    edge = hull([a, b] + list(v[2:]))
    return {
        "negative simplex over n": _logged("ioe-upper-tight", -1, {"n": n, "body": to_obj(neg)}),
        "reference simplex": _logged("ioe-upper-tight", -2, {"n": n, "body": to_obj(hull(v))}),
        "two points on an edge": _logged("ioe-lower-tight", -3, {"n": n, "body": to_obj(edge)}),
    }


def _extras_negative(n, p):
    neg = hull([scale(-1, v) for v in reference_simplex(n).vertices])
    return {"negative simplex": _logged("negative", -1, {"n": n, "body": to_obj(neg)})}


@dataclass(frozen=True)
class _Suite:
    check: str
    sample: object
    extras: object = None


SUITES = {
    "sum": _Suite("sum", _sample_sum),
    "union": _Suite("union", _sample_union),
    "symmetric": _Suite("symmetric", _sample_symmetric),
    "depth": _Suite("depth", _sample_depth, _extras_depth),
    "ioe": _Suite("ioe", _sample_body, _extras_ioe),
    "deinf": _Suite("deinf", _sample_deinf),
    "negative": _Suite("negative", _sample_body, _extras_negative),
}


# --- running ---------------------------------------------------------------------

def _logged(check, trial, inst) -> TrialLog:
    quantities, violations = EVALUATORS[check](inst)
    return TrialLog(check, trial, inst, quantities, violations)


def run_trial(name: str, n: int, params: dict, trial: int) -> TrialLog:
    """Sample and evaluate one trial of a suite from its ``(seed, trial)`` substream."""
    suite = SUITES[name]
    rng = np.random.default_rng(np.random.SeedSequence([params["seed"], trial]))
    return _logged(suite.check, trial, suite.sample(n, rng, params))


def worker_count() -> int:
    """Workers allowed by ``SGAUGE_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("SGAUGE_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(name: str, n: int, trials: int, seed: int, d: int | None = None,
              grid_bound: int = GRID_BOUND, workers: int | None = None) -> SuiteReport:
    if name not in SUITES:
        raise PreconditionError(f"unknown suite {name!r}")
    if n < 1 or trials < 0 or grid_bound < 1:
        raise PreconditionError("need n >= 1, trials >= 0, grid_bound >= 1")
    if name == "depth":
        # ceil(log2(n+1)) == n.bit_length() for n >= 1
        if d is None or not 0 < d < n.bit_length():
            raise PreconditionError(f"depth law needs 0 < d < ceil(log2(n+1)), got n={n}, d={d}")
    params = {"n": n, "d": d, "trials": trials, "grid_bound": grid_bound, "seed": seed}
    start = time.perf_counter()
    job = partial(run_trial, name, n, params)
    workers = min(workers or worker_count(), max(trials, 1))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            logs = list(pool.map(job, range(trials), chunksize=max(1, trials // (4 * workers))))
    else:
        logs = [job(t) for t in range(trials)]
    report = SuiteReport(name, params)
    for log in logs:
        if log.verdict:
            report.passed += 1
        else:
            report.failed += 1
            report.failures.append(log)
    extras = SUITES[name].extras
    if extras is not None:
        report.extras = extras(n, params)
    report.wall_time = time.perf_counter() - start
    return report


def check_sum_laws(n, trials, seed, **kw) -> SuiteReport:
    return run_suite("sum", n, trials, seed, **kw)


def check_union_laws(n, trials, seed, **kw) -> SuiteReport:
    return run_suite("union", n, trials, seed, **kw)


def check_symmetric_law(n, trials, seed, **kw) -> SuiteReport:
    return run_suite("symmetric", n, trials, seed, **kw)


def check_depth_law(n, d, trials, seed, **kw) -> SuiteReport:
    return run_suite("depth", n, trials, seed, d=d, **kw)


def check_io_e_bounds(n, trials, seed, **kw) -> SuiteReport:
    return run_suite("ioe", n, trials, seed, **kw)


def check_de_inf(n, trials, seed, **kw) -> SuiteReport:
    return run_suite("deinf", n, trials, seed, **kw)


def check_negative_sharpness(n, trials, seed, **kw) -> SuiteReport:
    return run_suite("negative", n, trials, seed, **kw)
