"""Polytope circuits: expression DAGs over points, Minkowski sums and hull-unions.

A circuit of depth ``d`` represents a member of the depth-``d`` class: points
have depth 0, sums are free, and each binary union adds one level.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .errors import CandidateLimitError, CircuitFormatError, DimensionError, PreconditionError
from .geometry import (
    ZERO,
    Q,
    Rational,
    Vector,
    add,
    dot,
    format_rational,
    neg,
    parse_rational,
    reference_simplex,
    scale,
    sub,
    unit,
    vec,
)

DEFAULT_CANDIDATE_CAP = 10**6


@dataclass(frozen=True)
class Point:
    coords: Vector

    def __post_init__(self):
        object.__setattr__(self, "coords", vec(self.coords))


@dataclass(frozen=True)
class Sum:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise CircuitFormatError("a sum needs at least one child")


@dataclass(frozen=True)
class Union:
    left: object
    right: object

    @property
    def children(self):
        return (self.left, self.right)


Node = Point | Sum | Union


@dataclass(frozen=True)
class CircuitStats:
    depth: int
    leaf_count: int
    node_count: int


class Circuit:
    """An immutable polytope circuit over R^dim."""

    def __init__(self, dim: int, root: Node):
        if dim < 1:
            raise DimensionError("circuit dimension must be positive")
        self.dim = dim
        self.root = root
        _check_dims(root, dim)

    def __repr__(self):
        return f"Circuit(dim={self.dim}, depth={depth(self)})"

    def __eq__(self, other):
        return isinstance(other, Circuit) and self.dim == other.dim and self.root == other.root

    def __hash__(self):
        return hash((self.dim, self.root))

    def __add__(self, other: "Circuit") -> "Circuit":
        return minkowski_sum([self, other])

    def map_points(self, f) -> "Circuit":
        """Image of the represented polytope under the affine map ``f``.

        Leaves go through the linear part of ``f``; the translation is added
        once at the root, since ``f(a + b) != f(a) + f(b)`` for affine ``f``.
        """
        origin = f((ZERO,) * self.dim)
        memo = {}

        def go(node):
            key = id(node)
            if key not in memo:
                if isinstance(node, Point):
                    memo[key] = Point(sub(f(node.coords), origin))
                elif isinstance(node, Sum):
                    memo[key] = Sum(tuple(go(c) for c in node.children))
                else:
                    memo[key] = Union(go(node.left), go(node.right))
            return memo[key]

        root = go(self.root)
        if any(origin):
            root = Sum((root, Point(origin)))
        return Circuit(self.dim, root)

    def scaled(self, c) -> "Circuit":
        c = Q(c)
        return self.map_points(lambda p: scale(c, p))

    def translated(self, t) -> "Circuit":
        return Circuit(self.dim, Sum((self.root, Point(t))))


def _check_dims(node, dim, seen=None):
    seen = set() if seen is None else seen
    stack = [node]
    while stack:
        nd = stack.pop()
        if id(nd) in seen:
            continue
        seen.add(id(nd))
        if isinstance(nd, Point):
            if len(nd.coords) != dim:
                raise DimensionError(f"point of dimension {len(nd.coords)} in a circuit over R^{dim}")
        elif isinstance(nd, (Sum, Union)):
            stack.extend(nd.children)
        else:
            raise CircuitFormatError(f"unknown node kind: {type(nd).__name__}")


# --- constructors -----------------------------------------------------------

def point(coords) -> Circuit:
    p = vec(coords)
    return Circuit(len(p), Point(p))


def union_all(nodes: Sequence[Node]) -> Node:
    """Balanced binary union tree over ``nodes`` (depth cost ceil(log2 m))."""
    nodes = list(nodes)
    if not nodes:
        raise CircuitFormatError("union of nothing")
    while len(nodes) > 1:
        nxt = [Union(nodes[i], nodes[i + 1]) for i in range(0, len(nodes) - 1, 2)]
        if len(nodes) % 2:
            nxt.append(nodes[-1])
        nodes = nxt
    return nodes[0]


def hull(points: Sequence) -> Circuit:
    """Circuit for conv(points) as a balanced union tree."""
    pts = [vec(p) for p in points]
    return Circuit(len(pts[0]), union_all([Point(p) for p in pts]))


def minkowski_sum(circuits: Sequence[Circuit]) -> Circuit:
    dims = {c.dim for c in circuits}
    if len(dims) != 1:
        raise DimensionError("summands live in different dimensions")
    return Circuit(dims.pop(), Sum(tuple(c.root for c in circuits)))


def hull_union(a: Circuit, b: Circuit) -> Circuit:
    if a.dim != b.dim:
        raise DimensionError("operands live in different dimensions")
    return Circuit(a.dim, Union(a.root, b.root))


def simplex_circuit(vertices: Sequence) -> Circuit:
    return hull(vertices)


def simplex_power_construction(n: int, d: int) -> Circuit:
    """Depth-d circuit for the hull of the first 2^d vertices of the reference simplex."""
    if d < 0 or 2**d > n + 1:
        raise PreconditionError(f"need 1 <= 2^d <= n+1, got n={n}, d={d}")
    verts = reference_simplex(n).vertices[: 2**d]
    return Circuit(n, union_all([Point(v) for v in verts]))


def zonotope(generators: Sequence) -> Circuit:
    """Sum of segments ``[a_i, b_i]``."""
    gens = [(vec(a), vec(b)) for a, b in generators]
    if not gens:
        raise PreconditionError("a zonotope needs at least one generator")
    dims = {len(a) for a, _ in gens} | {len(b) for _, b in gens}
    if len(dims) != 1:
        raise DimensionError("generator endpoints have inconsistent dimensions")
    return Circuit(dims.pop(), Sum(tuple(Union(Point(a), Point(b)) for a, b in gens)))


# --- evaluation -------------------------------------------------------------

def support(P: Circuit, w) -> Rational:
    """h_P(w) = max over P of <x, w>."""
    w = vec(w)
    if len(w) != P.dim:
        raise DimensionError(f"direction of dimension {len(w)} for a circuit over R^{P.dim}")
    return _support(P.root, w, {})


def _support(node, w, memo):
    key = id(node)
    if key in memo:
        return memo[key]
    if isinstance(node, Point):
        val = dot(node.coords, w)
    elif isinstance(node, Sum):
        val = sum((_support(c, w, memo) for c in node.children), ZERO)
    else:
        val = max(_support(node.left, w, memo), _support(node.right, w, memo))
    memo[key] = val
    return val


def support_many(P: Circuit, directions) -> list:
    return [support(P, w) for w in directions]


def support_float(P: Circuit, X: np.ndarray) -> np.ndarray:
    """Vectorised floating-point support values for the rows of ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != P.dim:
        raise DimensionError(f"directions of dimension {X.shape[1]} for a circuit over R^{P.dim}")
    memo = {}

    def go(node):
        key = id(node)
        if key not in memo:
            if isinstance(node, Point):
                memo[key] = X @ np.array([float(c) for c in node.coords])
            elif isinstance(node, Sum):
                acc = go(node.children[0]).copy()
                for c in node.children[1:]:
                    acc += go(c)
                memo[key] = acc
            else:
                memo[key] = np.maximum(go(node.left), go(node.right))
        return memo[key]

    return go(P.root)


def depth(P: Circuit | Node) -> int:
    node = P.root if isinstance(P, Circuit) else P
    memo = {}

    def go(nd):
        key = id(nd)
        if key not in memo:
            if isinstance(nd, Point):
                memo[key] = 0
            elif isinstance(nd, Sum):
                memo[key] = max(go(c) for c in nd.children)
            else:
                memo[key] = 1 + max(go(nd.left), go(nd.right))
        return memo[key]

    return go(node)


def stats(P: Circuit) -> CircuitStats:
    """Depth and tree-expanded leaf/node counts."""
    memo = {}

    def go(nd):
        key = id(nd)
        if key not in memo:
            if isinstance(nd, Point):
                memo[key] = (1, 1)
            else:
                parts = [go(c) for c in nd.children]
                memo[key] = (sum(p[0] for p in parts), 1 + sum(p[1] for p in parts))
        return memo[key]

    leaves, nodes = go(P.root)
    return CircuitStats(depth(P), leaves, nodes)


def candidate_count(P: Circuit | Node) -> int:
    node = P.root if isinstance(P, Circuit) else P
    memo = {}

    def go(nd):
        key = id(nd)
        if key not in memo:
            if isinstance(nd, Point):
                memo[key] = 1
            elif isinstance(nd, Sum):
                memo[key] = math.prod(go(c) for c in nd.children)
            else:
                memo[key] = go(nd.left) + go(nd.right)
        return memo[key]

    return go(node)


def candidate_vertices(P: Circuit, cap: int = DEFAULT_CANDIDATE_CAP) -> list:
    """A finite superset of the vertex set (no pruning, no deduplication)."""
    count = candidate_count(P)
    if count > cap:
        raise CandidateLimitError(f"{count} candidates exceed the cap of {cap}")

    def go(nd):
        if isinstance(nd, Point):
            return [nd.coords]
        if isinstance(nd, Union):
            return go(nd.left) + go(nd.right)
        out = go(nd.children[0])
        for c in nd.children[1:]:
            out = [add(a, b) for a, b in product(out, go(c))]
        return out

    return go(P.root)


def is_single_point(P: Circuit | Node, dim: int | None = None) -> bool:
    """True iff the represented polytope is one point (zero width along every axis)."""
    if isinstance(P, Circuit):
        node, dim = P.root, P.dim
    else:
        node = P
    for i in range(dim):
        e = unit(dim, i)
        if _support(node, e, {}) + _support(node, neg(e), {}) != 0:
            return False
    return True


# --- random instances -------------------------------------------------------

def random_rational(rng: np.random.Generator, grid_bound: int) -> Rational:
    num = int(rng.integers(-grid_bound, grid_bound + 1))
    den = int(rng.integers(1, grid_bound + 1))
    return Q(num) / den


def random_point(rng, n, grid_bound) -> Vector:
    return tuple(random_rational(rng, grid_bound) for _ in range(n))


def random_circuit(n: int, d: int, grid_bound: int, seed: int, max_terms: int = 2) -> Circuit:
    """Deterministic random circuit of depth at most ``d``.

    Each depth level is a sum of 1..max_terms unions whose operands have depth
    below the level; union operands are never the same point, so every circuit
    with ``d >= 1`` has at least two distinct candidate vertices.
    """
    if n < 1 or d < 0 or grid_bound < 1:
        raise PreconditionError("need n >= 1, d >= 0, grid_bound >= 1")
    rng = np.random.default_rng(seed)

    def build(level):
        if level == 0:
            return Point(random_point(rng, n, grid_bound))
        terms = []
        for _ in range(int(rng.integers(1, max_terms + 1))):
            left = build(_child_level(rng, level))
            right = build(_child_level(rng, level))
            # repair a degenerate operand by pairing it with a distinct point
            while isinstance(left, Point) and isinstance(right, Point) and left == right:
                right = Point(random_point(rng, n, grid_bound))
            terms.append(Union(left, right))
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    return Circuit(n, build(d))


def _child_level(rng, level):
    if level == 1:
        return 0
    return level - 1 if rng.random() < 0.75 else int(rng.integers(0, level - 1))


# --- text format ------------------------------------------------------------

def node_to_obj(node) -> dict:
    if isinstance(node, Point):
        return {"op": "point", "coords": [format_rational(c) for c in node.coords]}
    if isinstance(node, Sum):
        return {"op": "sum", "args": [node_to_obj(c) for c in node.children]}
    return {"op": "union", "args": [node_to_obj(node.left), node_to_obj(node.right)]}


def to_obj(P: Circuit) -> dict:
    return {"dim": P.dim, "root": node_to_obj(P.root)}


def serialize_circuit(P: Circuit) -> str:
    return json.dumps(to_obj(P), separators=(",", ":"))


def node_from_obj(obj, dim: int):
    if not isinstance(obj, dict) or "op" not in obj:
        raise CircuitFormatError("node must be an object with an 'op' key")
    op = obj["op"]
    if op == "point":
        coords = obj.get("coords")
        if not isinstance(coords, list):
            raise CircuitFormatError("point needs a 'coords' list")
        if len(coords) != dim:
            raise DimensionError(f"point of dimension {len(coords)} in a circuit over R^{dim}")
        return Point(tuple(parse_rational(c) for c in coords))
    if op in ("sum", "union"):
        args = obj.get("args")
        if not isinstance(args, list) or not args:
            raise CircuitFormatError(f"{op} needs a non-empty 'args' list")
        if op == "union" and len(args) != 2:
            raise CircuitFormatError(f"union must be binary, got {len(args)} operands")
        kids = [node_from_obj(a, dim) for a in args]
        return Sum(tuple(kids)) if op == "sum" else Union(*kids)
    raise CircuitFormatError(f"unknown node kind: {op!r}")


def from_obj(obj) -> Circuit:
    if not isinstance(obj, dict) or not isinstance(obj.get("dim"), int) or "root" not in obj:
        raise CircuitFormatError("circuit must be an object with integer 'dim' and 'root'")
    return Circuit(obj["dim"], node_from_obj(obj["root"], obj["dim"]))


def parse_circuit(text: str) -> Circuit:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"invalid JSON: {exc}") from None
    return from_obj(obj)
