"""Outer additivity of a polytope and a search for violating interval pairs.

``lam_K(L)`` is the smallest coefficient of a homothet of ``K`` containing
``L``.  It is always subadditive under Minkowski sums; the search below looks
for two intervals where it is strictly so.

For a direction ``u`` take ``a`` on the face minimizing ``<., u>`` and ``b`` on
the face maximizing it.  If some boundary point ``x`` shares no facet with
``a`` or ``b``, let ``y`` be a vertex farthest from the facet of ``x`` and
extend ``[a + y, b + y]`` along ``x - y`` as far as ``2K`` allows.  The two
intervals ``[a + y, b + y]`` and ``[0, alpha (x - y)]`` then have a positive
gap whenever the construction applies.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .circuit import Circuit, hull, minkowski_sum
from .errors import BoundaryError, BudgetExhausted, DegenerateError, DimensionError
from .geometry import (
    ZERO,
    Rational,
    Vector,
    add,
    affine_rank,
    dot,
    format_rational,
    primitive,
    scale,
    sub,
    vec,
    vsum,
)
from .polytope import Polytope, in_hull, outer_coefficient_general

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class SupportFace:
    direction: Vector
    vertices: tuple


@dataclass(frozen=True)
class AdditivityWitness:
    u: Vector
    a: Vector
    b: Vector
    x: Vector
    y: Vector
    L1: tuple
    L2: tuple
    gap: Rational

    def circuits(self) -> tuple:
        return hull(self.L1), hull(self.L2)

    def verify(self, K: Polytope) -> bool:
        """Recompute the gap and check ``(L1 + L2) / 2`` lies in ``K``."""
        L1, L2 = self.circuits()
        if additivity_gap(K, L1, L2) != self.gap or self.gap <= 0:
            return False
        verts = list(K.v.vertices)
        return all(
            in_hull(verts, scale(Rational(1, 2), add(p, q))) for p in self.L1 for q in self.L2
        )

    def to_obj(self) -> dict:
        f = lambda v: [format_rational(c) for c in v]  # noqa: E731
        return {
            "u": f(self.u),
            "a": f(self.a),
            "b": f(self.b),
            "x": f(self.x),
            "y": f(self.y),
            "L1": [f(p) for p in self.L1],
            "L2": [f(p) for p in self.L2],
            "gap": format_rational(self.gap),
        }


def support_face(K, u) -> SupportFace:
    """Vertices of ``K`` attaining the maximum of ``<., u>``."""
    u = vec(u)
    verts = K.v.vertices if isinstance(K, Polytope) else K.vertices
    if len(u) != len(verts[0]):
        raise DimensionError("direction dimension does not match the polytope")
    if not any(u):
        raise ValueError("direction must be nonzero")
    vals = [dot(v, u) for v in verts]
    top = max(vals)
    return SupportFace(u, tuple(v for v, h in zip(verts, vals) if h == top))


def boundary_flat(K: Polytope, p, q) -> bool:
    """True iff ``p`` and ``q`` lie on a common facet, i.e. ``[p, q]`` stays on the boundary."""
    p, q = vec(p), vec(q)
    fp, fq = K.h.active(p), K.h.active(q)
    for name, pt, f in (("p", p, fp), ("q", q, fq)):
        if not f or not K.h.contains(pt):
            raise BoundaryError(f"{name} = {[format_rational(c) for c in pt]} is not on the boundary")
    return bool(fp & fq)


def outer_coefficient(K: Polytope, L: Circuit) -> Rational:
    return outer_coefficient_general(K, L)[1]


def additivity_gap(K: Polytope, L1: Circuit, L2: Circuit) -> Rational:
    """``lam_K(L1) + lam_K(L2) - lam_K(L1 + L2)``, exactly; never negative."""
    if affine_rank(list(K.v.vertices)) < K.dim:
        raise DegenerateError("K is not full-dimensional")
    total = outer_coefficient(K, minkowski_sum([L1, L2]))
    return outer_coefficient(K, L1) + outer_coefficient(K, L2) - total


def candidate_directions(K: Polytope) -> list:
    """Facet normals, vertex differences, then pairwise sums; one per line through 0."""
    base = [h.normal for h in K.h.halfspaces]
    base += [sub(p, q) for p, q in combinations(K.v.vertices, 2)]
    out, seen = [], set()

    def push(u):
        if not any(u):
            return
        u = primitive(u)
        key = max(u, tuple(-c for c in u))
        if key not in seen:
            seen.add(key)
            out.append(u)

    for u in base:
        push(u)
    first = list(out)
    for u, w in combinations(first, 2):
        push(add(u, w))
    return out


def _stretch(K: Polytope, p, d) -> Rational:
    """Largest ``t`` with ``p + t d`` in ``2K`` (a one-variable LP)."""
    best = None
    for h in K.h.halfspaces:
        rate = dot(h.normal, d)
        if rate > 0:
            t = (2 * h.offset - dot(h.normal, p)) / rate
            best = t if best is None or t < best else best
    if best is None:
        raise DegenerateError("unbounded stretch; K is not bounded")
    return best


def _candidates(K: Polytope):
    """Yield ``(u, a, b, x, y)`` in a fixed order."""
    verts = K.v.vertices
    n = K.dim
    facets = K.h.halfspaces
    facet_verts = [tuple(v for v in verts if h.value(v) == 0) for h in facets]
    centroids = [scale(Rational(1, len(fv)), vsum(fv, n)) for fv in facet_verts]
    opposite = []
    for h in facets:
        vals = [dot(h.normal, v) for v in verts]
        low = min(vals)
        opposite.append(tuple(v for v, s in zip(verts, vals) if s == low))
    for u in candidate_directions(K):
        A = support_face(K, tuple(-c for c in u)).vertices
        B = support_face(K, u).vertices
        for a in A:
            for b in B:
                for i, h in enumerate(facets):
                    if h.value(a) == 0 or h.value(b) == 0:
                        continue
                    for y in opposite[i]:
                        yield u, a, b, centroids[i], y


def _evaluate(K: Polytope, cand) -> AdditivityWitness | None:
    u, a, b, x, y = cand
    d = sub(x, y)
    p, q = add(a, y), add(b, y)
    alpha = min(_stretch(K, p, d), _stretch(K, q, d))
    if alpha <= 0:
        return None
    seg1 = (p, q)
    seg2 = (tuple(ZERO for _ in u), scale(alpha, d))
    gap = additivity_gap(K, hull(seg1), hull(seg2))
    if gap <= 0:
        return None
    return AdditivityWitness(u, a, b, x, y, seg1, seg2, gap)


def find_witness(K: Polytope, budget: int = DEFAULT_BUDGET) -> AdditivityWitness | None:
    """First interval pair with a positive gap, or ``None`` after a full scan.

    ``budget`` caps the number of evaluated candidates; running out before the
    scan ends raises :class:`BudgetExhausted`.  ``None`` only means no witness
    exists among the enumerated candidates.
    """
    if affine_rank(list(K.v.vertices)) < K.dim:
        raise DegenerateError("K is not full-dimensional")
    scanned = 0
    for cand in _candidates(K):
        if scanned >= budget:
            raise BudgetExhausted(scanned)
        scanned += 1
        w = _evaluate(K, cand)
        if w is not None:
            return w
    return None


@dataclass(frozen=True)
class Coverage:
    directions: int
    candidates: int
    witnesses: int


def coverage(K: Polytope, budget: int = DEFAULT_BUDGET) -> Coverage:
    """How many scanned candidates yield a positive gap (up to ``budget``)."""
    count = hits = 0
    for cand in _candidates(K):
        if count >= budget:
            break
        count += 1
        hits += _evaluate(K, cand) is not None
    return Coverage(len(candidate_directions(K)), count, hits)
