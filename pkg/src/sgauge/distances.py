"""Distances of a body to a simplex: outer/inner coefficients, in-out and empty-corner distances.

Everything here reduces to the range of each barycentric coordinate over the
body, which two support evaluations per facet give exactly.  For a homothet
``H = {p : beta_j(p) >= c_j}`` of the simplex (coefficient ``1 - sum c``)
containing ``L``, the corner at vertex ``j`` has size ``lam(H) - (M_j - c_j)``
where ``M_j`` is the largest ``j``-th coordinate attained on ``L``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit, support
from .errors import ContainmentError, DegenerateError, DimensionError, PreconditionError
from .geometry import (
    ONE,
    ZERO,
    Homothet,
    Hyperplane,
    Q,
    Rational,
    Simplex,
    Vector,
    format_rational,
    neg,
    scale,
    solve,
    sub,
)
from .polytope import HPolytope, Polytope, VPolytope, inscribed_homothet


@dataclass(frozen=True)
class BarycentricRange:
    lows: tuple
    highs: tuple

    @property
    def dim(self) -> int:
        return len(self.lows) - 1


@dataclass(frozen=True)
class DistanceReport:
    lambda_outer: Rational
    outer_homothet: Homothet
    lambda_inner: Rational | None
    inner_translation: Vector | None
    d_io: Rational | None
    corners: tuple
    e_total: Rational
    d_e: Rational
    co_d_e: Rational
    slope_m: Rational

    def to_obj(self) -> dict:
        f = format_rational
        opt = lambda x: None if x is None else f(x)  # noqa: E731
        return {
            "lambda_outer": f(self.lambda_outer),
            "outer_translation": [f(c) for c in self.outer_homothet.translation],
            "outer_coefficient": f(self.outer_homothet.coefficient),
            "lambda_inner": opt(self.lambda_inner),
            "inner_translation": None if self.inner_translation is None else [f(c) for c in self.inner_translation],
            "d_io": opt(self.d_io),
            "corners": [f(e) for e in self.corners],
            "e_total": f(self.e_total),
            "d_e": f(self.d_e),
            "co_d_e": f(self.co_d_e),
            "slope_m": f(self.slope_m),
        }


def _check(S: Simplex, L):
    if L.dim != S.dim:
        raise DimensionError(f"body in R^{L.dim} against a simplex in R^{S.dim}")


def barycentric_range(S: Simplex, L: Circuit) -> BarycentricRange:
    """Exact min and max of every barycentric coordinate over ``L``."""
    _check(S, L)
    lows, highs = [], []
    for h, g in zip(S.facets, S.gaps):
        highs.append((support(L, h.normal) - h.offset) / g)
        lows.append((-support(L, neg(h.normal)) - h.offset) / g)
    return BarycentricRange(tuple(lows), tuple(highs))


def outer_simplex(S: Simplex, L: Circuit, rng: BarycentricRange | None = None) -> Homothet:
    """The smallest homothet of ``S`` containing ``L``."""
    rng = rng or barycentric_range(S, L)
    return Homothet.from_levels(S, rng.lows)


def lambda_outer(S: Simplex, L: Circuit) -> Rational:
    return ONE - sum(barycentric_range(S, L).lows, ZERO)


def empty_corners(S: Simplex, H: Homothet, L: Circuit, rng: BarycentricRange | None = None) -> tuple:
    """Per-vertex corner sizes of ``L`` inside ``H`` and their total."""
    if H.base != S:
        raise ValueError("homothet is not built on this simplex")
    rng = rng or barycentric_range(S, L)
    lam = H.coefficient
    if lam <= 0:
        raise PreconditionError("the enclosing homothet must have a positive coefficient")
    levels = H.levels()
    if any(lo < c for lo, c in zip(rng.lows, levels)):
        raise ContainmentError("body is not contained in the homothet")
    corners = tuple(lam - (hi - c) for hi, c in zip(rng.highs, levels))
    return corners, sum(corners, ZERO)


def empty_corner_distance(S: Simplex, L: Circuit) -> Rational:
    rng = barycentric_range(S, L)
    lam = ONE - sum(rng.lows, ZERO)
    if lam == 0:
        raise DegenerateError("a single point is not a convex body; empty-corner distance undefined")
    return (S.dim + 1) - sum((hi - lo for hi, lo in zip(rng.highs, rng.lows)), ZERO) / lam


def distance_report(S: Simplex, L: Circuit, inner: bool = True) -> DistanceReport:
    """All distances of ``L`` to ``S``; ``inner=False`` skips the inscribed-homothet LP."""
    rng = barycentric_range(S, L)
    H = outer_simplex(S, L, rng)
    lam_o = H.coefficient
    if lam_o == 0:
        raise DegenerateError("a single point is not a convex body; empty-corner distance undefined")
    corners, total = empty_corners(S, H, L, rng)
    n = S.dim
    d_e = total / lam_o
    if inner:
        t, lam_i = inscribed_homothet(S, L)
        d_io = lam_o - lam_i
    else:
        t = lam_i = d_io = None
    return DistanceReport(
        lambda_outer=lam_o,
        outer_homothet=H,
        lambda_inner=lam_i,
        inner_translation=t,
        d_io=d_io,
        corners=corners,
        e_total=total,
        d_e=d_e,
        co_d_e=(n + 1) - d_e,
        slope_m=n - d_e,
    )


def scaled_outer(S: Simplex, L: Circuit, k) -> Homothet:
    """``Delta_o(L)`` scaled by ``k`` about its own centroid."""
    H = outer_simplex(S, L)
    center = scale(ONE / (S.dim + 1), _vsum(H.vertices, S.dim))
    return H.scaled_about(k, center)


def _vsum(vs, n):
    acc = [ZERO] * n
    for v in vs:
        for i, x in enumerate(v):
            acc[i] += x
    return tuple(acc)


def de_inf_profile(S: Simplex, L: Circuit, scales: Sequence) -> list:
    """``(k, E(L; H_k) / lam(H_k))`` for concentric enlargements ``H_k`` of ``Delta_o(L)``."""
    rng = barycentric_range(S, L)
    H = outer_simplex(S, L, rng)
    if H.coefficient == 0:
        raise DegenerateError("a single point is not a convex body")
    center = scale(ONE / (S.dim + 1), _vsum(H.vertices, S.dim))
    out = []
    for k in scales:
        k = Q(k)
        if k < 1:
            raise PreconditionError(f"scale {k} is below 1")
        Hk = H.scaled_about(k, center)
        _, total = empty_corners(S, Hk, L, rng)
        out.append((k, total / Hk.coefficient))
    return out


@dataclass(frozen=True)
class NegativeEnvelope:
    """The simplex cut out by the supporting hyperplanes of ``L`` at the facet normals."""

    vertices: tuple
    coefficient: Rational  # N = x - coefficient * S


def negative_envelope(S: Simplex, L: Circuit) -> NegativeEnvelope:
    _check(S, L)
    n = S.dim
    normals = [h.normal for h in S.facets]
    offsets = [support(L, u) for u in normals]
    verts = []
    for j in range(n + 1):
        idx = [k for k in range(n + 1) if k != j]
        verts.append(solve([normals[k] for k in idx], [offsets[k] for k in idx]))
    # w_k - w_0 = -c (v_k - v_0) for every k
    coefficient = None
    for k in range(1, n + 1):
        dw, dv = sub(verts[k], verts[0]), sub(S.vertices[k], S.vertices[0])
        for a, b in zip(dw, dv):
            if b != 0:
                c = -a / b
                if coefficient is None:
                    coefficient = c
                elif c != coefficient:
                    raise DegenerateError("supporting hyperplanes do not bound a negative homothet")
            elif a != 0:
                raise DegenerateError("supporting hyperplanes do not bound a negative homothet")
    return NegativeEnvelope(tuple(verts), coefficient)


def simplex_polytope(S: Simplex) -> Polytope:
    """``S`` as a V+H polytope with halfspaces ``-<u_j, x> <= -b_j``."""
    hs = tuple(Hyperplane(neg(h.normal), -h.offset) for h in S.facets)
    return Polytope(VPolytope(S.dim, S.vertices), HPolytope(S.dim, hs))
