"""V/H polytopes and the LP-backed queries on circuits.

Circuit membership uses the homogenised extended formulation: every maximal
union-only subtree becomes a block of nonnegative scale variables summing to
the scale entering it, sums pass their scale to every child, and a point at
scale ``s`` contributes ``s * p`` to the represented value.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit, Point, Sum, Union, support
from .dd import extreme_rays, integer_row
from .errors import DegenerateError, DimensionError
from .geometry import (
    ONE,
    ZERO,
    Hyperplane,
    Q,
    Rational,
    Simplex,
    affine_rank,
    dot,
    format_rational,
    parse_rational,
    vec,
)
from .lp import EQ, LE, LinearProgram, solve


@dataclass(frozen=True)
class VPolytope:
    dim: int
    vertices: tuple

    def __post_init__(self):
        verts = tuple(vec(v) for v in self.vertices)
        if not verts:
            raise DegenerateError("a V-polytope needs at least one point")
        if any(len(v) != self.dim for v in verts):
            raise DimensionError("vertex dimension does not match")
        object.__setattr__(self, "vertices", verts)

    def support(self, w) -> Rational:
        return max(dot(v, w) for v in self.vertices)


@dataclass(frozen=True)
class HPolytope:
    """Intersection of the halfspaces ``<a_i, x> <= b_i``."""

    dim: int
    halfspaces: tuple

    def __post_init__(self):
        hs = tuple(h if isinstance(h, Hyperplane) else Hyperplane(*h) for h in self.halfspaces)
        if any(h.dim != self.dim for h in hs):
            raise DimensionError("halfspace dimension does not match")
        object.__setattr__(self, "halfspaces", hs)

    def contains(self, x) -> bool:
        return all(h.value(x) <= 0 for h in self.halfspaces)

    def active(self, x) -> frozenset:
        """Indices of the halfspaces tight at ``x``."""
        return frozenset(i for i, h in enumerate(self.halfspaces) if h.value(x) == 0)


@dataclass(frozen=True)
class Polytope:
    """A full-dimensional polytope carrying both representations."""

    v: VPolytope
    h: HPolytope

    @property
    def dim(self) -> int:
        return self.v.dim

    @classmethod
    def from_vertices(cls, points: Sequence) -> "Polytope":
        pts = [vec(p) for p in points]
        V = prune_vertices(VPolytope(len(pts[0]), pts))
        return cls(V, v_to_h(V))

    @classmethod
    def from_halfspaces(cls, dim: int, halfspaces) -> "Polytope":
        H = HPolytope(dim, halfspaces)
        V = h_to_v(H)
        return cls(V, v_to_h(V))

    def support(self, w) -> Rational:
        return self.v.support(w)


def support_of(body, w) -> Rational:
    if isinstance(body, Circuit):
        return support(body, w)
    return body.support(w)


# --- circuit extended formulation ------------------------------------------

class _Formulation:
    """Variables and constraints shared by membership-style LPs.

    ``block(root, offset)`` appends one copy of the circuit's scale variables;
    it returns the value terms ``[(var or None, point)]``.
    """

    def __init__(self):
        self.n_vars = 0
        self.rows = []  # (dict, rel, rhs)
        self.nonneg = []

    def new_var(self, nonneg=True) -> int:
        self.nonneg.append(nonneg)
        self.n_vars += 1
        return self.n_vars - 1

    def block(self, root):
        terms = []
        stack = [(root, None)]
        while stack:
            node, s = stack.pop()
            if isinstance(node, Point):
                terms.append((s, node.coords))
            elif isinstance(node, Sum):
                stack.extend((c, s) for c in node.children)
            else:
                frontier = _union_frontier(node)
                row = {}
                for f in frontier:
                    v = self.new_var()
                    row[v] = ONE
                    stack.append((f, v))
                if s is None:
                    self.rows.append((row, EQ, ONE))
                else:
                    row[s] = Q(-1)
                    self.rows.append((row, EQ, ZERO))
        return terms

    def program(self, objective_terms=None) -> LinearProgram:
        obj = [ZERO] * max(self.n_vars, 1)
        for j, c in (objective_terms or {}).items():
            obj[j] = c
        nonneg = self.nonneg or [True]
        return LinearProgram(tuple(obj), tuple(self.rows), tuple(nonneg))


def _union_frontier(node):
    out, stack = [], [node]
    while stack:
        nd = stack.pop()
        if isinstance(nd, Union):
            stack.append(nd.right)
            stack.append(nd.left)
        else:
            out.append(nd)
    return out


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    certificate: tuple | None = None

    def __bool__(self):
        return self.member


def membership(P: Circuit, x) -> MembershipResult:
    """Exact test of ``x in P``; the certificate is the LP's scale assignment."""
    x = vec(x)
    if len(x) != P.dim:
        raise DimensionError(f"point of dimension {len(x)} for a circuit over R^{P.dim}")
    form = _Formulation()
    terms = form.block(P.root)
    const = [ZERO] * P.dim
    for i in range(P.dim):
        row = {}
        for s, p in terms:
            if p[i]:
                if s is None:
                    const[i] += p[i]
                else:
                    row[s] = row.get(s, ZERO) + p[i]
        if row:
            form.rows.append((row, EQ, x[i] - const[i]))
        elif const[i] != x[i]:
            return MembershipResult(False)
    if form.n_vars == 0:
        return MembershipResult(True, ())
    out = solve(form.program())
    return MembershipResult(out.optimal, out.x if out.optimal else None)


def _inscribed_formulation(S: Simplex, P: Circuit):
    n = S.dim
    if P.dim != n:
        raise DimensionError("simplex and circuit dimensions differ")
    form = _Formulation()
    t = [form.new_var(nonneg=False) for _ in range(n)]
    lam = form.new_var()
    for v in S.vertices:
        terms = form.block(P.root)
        for i in range(n):
            row = {t[i]: Q(-1)}
            if v[i]:
                row[lam] = -v[i]
            rhs = ZERO
            for s, p in terms:
                if p[i]:
                    if s is None:
                        rhs -= p[i]
                    else:
                        row[s] = row.get(s, ZERO) + p[i]
            form.rows.append((row, EQ, rhs))
    return form, t, lam


def inscribed_homothet(S: Simplex, P: Circuit) -> tuple:
    """Largest ``t + lam * S`` inside ``P``; returns ``(t, lam)``."""
    form, t, lam = _inscribed_formulation(S, P)
    out = solve(form.program({lam: ONE}))
    if not out.optimal:
        raise DegenerateError(f"inscribed-homothet LP is {out.status}")
    return tuple(out.x[i] for i in t), out.x[lam]


def homothet_fits(S: Simplex, P: Circuit, lam) -> bool:
    """Whether some translate of ``lam * S`` lies inside ``P``."""
    form, _, var = _inscribed_formulation(S, P)
    form.rows.append(({var: ONE}, EQ, Q(lam)))
    return solve(form.program()).optimal


def outer_coefficient_general(K, L) -> tuple:
    """Smallest ``lam`` with ``L`` inside some ``t + lam * K``; returns ``(t, lam)``.

    ``K`` is a :class:`Polytope` (or an ``(HPolytope, VPolytope)`` pair);
    containment is certified by support dominance at K's facet normals.
    """
    if isinstance(K, tuple):
        H, V = K
    else:
        H, V = K.h, K.v
    n = H.dim
    if V.dim != n or L.dim != n:
        raise DimensionError("dimension mismatch")
    rows = []
    for hs in H.halfspaces:
        a = hs.normal
        hk = V.support(a)
        row = {i: -a[i] for i in range(n) if a[i]}
        if hk:
            row[n] = -hk
        rows.append((row, LE, -support_of(L, a)))
    obj = (ZERO,) * n + (Q(-1),)
    out = solve(LinearProgram(obj, tuple(rows), (False,) * n + (True,)))
    if not out.optimal:
        raise DegenerateError(f"outer-coefficient LP is {out.status}; K must be bounded and full-dimensional")
    return out.x[:n], out.x[n]


# --- vertex pruning and V/H conversion ---------------------------------------

def in_hull(points: Sequence, x) -> bool:
    """Exact LP test of ``x in conv(points)``."""
    k = len(points)
    if k == 0:
        return False
    rows = [({j: ONE for j in range(k)}, EQ, ONE)]
    for i in range(len(x)):
        rows.append(({j: p[i] for j, p in enumerate(points) if p[i]}, EQ, x[i]))
    return solve(LinearProgram((ZERO,) * k, tuple(rows), (True,) * k)).optimal


def prune_vertices(V: VPolytope) -> VPolytope:
    """Drop every point lying in the hull of the remaining ones."""
    pts = list(dict.fromkeys(V.vertices))
    i = 0
    while i < len(pts):
        others = pts[:i] + pts[i + 1:]
        if others and in_hull(others, pts[i]):
            del pts[i]
        else:
            i += 1
    return VPolytope(V.dim, tuple(pts))


def v_to_h(V: VPolytope) -> HPolytope:
    n = V.dim
    if affine_rank(list(V.vertices)) < n:
        raise DegenerateError("lower-dimensional V-polytope")
    rows = [tuple(v) + (Q(-1),) for v in V.vertices]
    halfspaces = []
    for ray in extreme_rays(rows):
        a, beta = ray[:n], ray[n]
        if any(a):
            halfspaces.append(Hyperplane(a, beta))
    return HPolytope(n, tuple(halfspaces))


def h_to_v(H: HPolytope) -> VPolytope:
    n = H.dim
    rows = [tuple(h.normal) + (-h.offset,) for h in H.halfspaces]
    rows.append((ZERO,) * n + (Q(-1),))
    try:
        rays = extreme_rays(rows)
    except DegenerateError:
        raise DegenerateError("unbounded H-polytope") from None
    verts = []
    for ray in rays:
        s = ray[n]
        if s == 0:
            raise DegenerateError("unbounded H-polytope")
        verts.append(tuple(Q(c) / s for c in ray[:n]))
    if not verts:
        raise DegenerateError("empty H-polytope")
    if affine_rank(verts) < n:
        raise DegenerateError("lower-dimensional H-polytope")
    return VPolytope(n, tuple(verts))


def canonical_halfspace(h: Hyperplane) -> tuple:
    """Scale-free key of a halfspace, for comparing H-representations."""
    row = integer_row(tuple(h.normal) + (h.offset,))
    return row


# --- file formats ------------------------------------------------------------

def vpolytope_to_obj(V: VPolytope) -> dict:
    return {"dim": V.dim, "vertices": [[format_rational(c) for c in v] for v in V.vertices]}


def hpolytope_to_obj(H: HPolytope) -> dict:
    return {
        "dim": H.dim,
        "halfspaces": [
            {"a": [format_rational(c) for c in h.normal], "b": format_rational(h.offset)}
            for h in H.halfspaces
        ],
    }


def vpolytope_from_obj(obj) -> VPolytope:
    dim = obj["dim"]
    return VPolytope(dim, tuple(tuple(parse_rational(c) for c in v) for v in obj["vertices"]))


def hpolytope_from_obj(obj) -> HPolytope:
    dim = obj["dim"]
    hs = []
    for h in obj["halfspaces"]:
        a = tuple(parse_rational(c) for c in h["a"])
        if len(a) != dim:
            raise DimensionError("halfspace dimension does not match")
        hs.append(Hyperplane(a, parse_rational(h["b"])))
    return HPolytope(dim, tuple(hs))


def load_vpolytope(text: str) -> VPolytope:
    return vpolytope_from_obj(json.loads(text))


def load_hpolytope(text: str) -> HPolytope:
    return hpolytope_from_obj(json.loads(text))
