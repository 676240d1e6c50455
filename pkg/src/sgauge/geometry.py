"""Exact rational scalars, vectors, hyperplanes, affine maps and simplices.

Scalars are ``gmpy2.mpq`` values; vectors are plain tuples of them.  Every
public constructor coerces ints, ``fractions.Fraction`` and rational strings.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import DimensionError, MalformedRationalError, SingularMapError

Rational = type(mpq())
Vector = tuple

ZERO = mpq(0)
ONE = mpq(1)

_RATIONAL_RE = re.compile(r"-?[0-9]+(/[0-9]+)?")


def Q(value) -> Rational:
    """Coerce ``value`` to an exact rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def parse_rational(text: str) -> Rational:
    """Parse ``"p"`` or ``"p/q"`` (q > 0, no whitespace, no leading ``+``)."""
    if not isinstance(text, str) or not _RATIONAL_RE.fullmatch(text):
        raise MalformedRationalError(text)
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise MalformedRationalError(text)
        return mpq(int(num), int(den))
    return mpq(int(text))


def format_rational(x) -> str:
    return str(Q(x))


def vec(values: Iterable) -> Vector:
    return tuple(Q(v) for v in values)


def parse_vector(text: str) -> Vector:
    """Parse a comma-separated list of rationals, e.g. ``"1/2,-3"``."""
    return tuple(parse_rational(part) for part in text.split(","))


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def add(a: Sequence, b: Sequence) -> Vector:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vector:
    c = Q(c)
    return tuple(c * x for x in a)


def neg(a: Sequence) -> Vector:
    return tuple(-x for x in a)


def vsum(vectors: Iterable[Sequence], dim: int) -> Vector:
    acc = [ZERO] * dim
    for v in vectors:
        for i, x in enumerate(v):
            acc[i] += x
    return tuple(acc)


def primitive_factor(a: Sequence) -> Rational:
    """The positive ``c`` such that ``c * a`` has coprime integer entries."""
    dens = [int(x.denominator) for x in a if x != 0]
    if not dens:
        return ONE
    lcm = math.lcm(*dens)
    g = math.gcd(*(int(x * lcm) for x in a))
    return mpq(lcm, g)


def primitive(a: Sequence) -> Vector:
    """Positive multiple of ``a`` with coprime integer entries."""
    return scale(primitive_factor(a), a)


# --- small dense exact linear algebra -------------------------------------

def _echelon(rows):
    """Row-reduce a copy of ``rows`` in place; return (matrix, pivot columns, sign)."""
    m = [list(r) for r in rows]
    pivots = []
    sign = 1
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            sign = -sign
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots, sign


def rank(rows) -> int:
    rows = [r for r in rows]
    if not rows:
        return 0
    return len(_echelon(rows)[1])


def det(matrix) -> Rational:
    n = len(matrix)
    m = [list(map(Q, r)) for r in matrix]
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        piv = m[c][c]
        result *= piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(matrix):
    n = len(matrix)
    aug = [list(map(Q, row)) + list(unit(n, i)) for i, row in enumerate(matrix)]
    red, pivots, _ = _echelon(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMapError("matrix is singular")
    return [tuple(row[n:]) for row in red]


def solve(matrix, rhs) -> Vector:
    """Solve the square system ``matrix @ x = rhs`` exactly."""
    n = len(matrix)
    aug = [list(map(Q, row)) + [Q(b)] for row, b in zip(matrix, rhs)]
    red, pivots, _ = _echelon(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise SingularMapError("matrix is singular")
    return tuple(red[i][n] for i in range(n))


def matvec(matrix, v) -> Vector:
    return tuple(dot(row, v) for row in matrix)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of ``points`` (``-1`` when empty)."""
    if not points:
        return -1
    base = points[0]
    return rank([sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


# --- hyperplanes, affine maps ----------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """``{x : <normal, x> = offset}``; also read as the halfspace ``<=`` offset."""

    normal: Vector
    offset: Rational

    def __post_init__(self):
        object.__setattr__(self, "normal", vec(self.normal))
        object.__setattr__(self, "offset", Q(self.offset))
        if all(x == 0 for x in self.normal):
            raise ValueError("hyperplane normal must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.normal)

    def value(self, p) -> Rational:
        return dot(self.normal, p) - self.offset


def oriented_distance(p: Sequence, h: Hyperplane) -> Rational:
    """``<u, p> - b`` for the stored ``(u, b)``; only ratios are scale-free."""
    return h.value(p)


@dataclass(frozen=True)
class AffineMap:
    matrix: tuple
    translation: Vector

    def __post_init__(self):
        mat = tuple(vec(r) for r in self.matrix)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "translation", vec(self.translation))
        if any(len(r) != len(mat) for r in mat) or len(self.translation) != len(mat):
            raise DimensionError("affine map must be square with matching translation")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n):
        return cls(tuple(unit(n, i) for i in range(n)), zeros(n))

    @cached_property
    def determinant(self) -> Rational:
        return det(self.matrix)

    def __call__(self, p) -> Vector:
        return add(matvec(self.matrix, p), self.translation)


# --- simplices and homothets -----------------------------------------------

class Simplex:
    """An n-simplex in R^n with facet functionals.

    ``facets[j]`` is the hyperplane through every vertex except ``v_j``, with a
    primitive integer normal oriented so that ``<u_j, v_j> > b_j``;
    ``gaps[j] = <u_j, v_j> - b_j``.
    """

    def __init__(self, vertices: Sequence[Sequence]):
        verts = tuple(vec(v) for v in vertices)
        n = len(verts) - 1
        if n < 1 or any(len(v) != n for v in verts):
            raise DimensionError("a simplex in R^n needs n+1 vertices of dimension n")
        edges = [sub(v, verts[0]) for v in verts[1:]]
        # rows of the inverse edge matrix give barycentric coordinates 1..n
        try:
            cols = inverse([tuple(e[i] for e in edges) for i in range(n)])
        except SingularMapError:
            raise SingularMapError("simplex vertices are affinely dependent") from None
        raw = []
        for k in range(n):
            raw.append((cols[k], dot(cols[k], verts[0])))
        u0 = neg(vsum(cols, n))
        raw.insert(0, (u0, dot(u0, verts[0]) - 1))
        facets, gaps = [], []
        for j, (u, b) in enumerate(raw):
            c = primitive_factor(u)
            h = Hyperplane(scale(c, u), c * b)
            facets.append(h)
            gaps.append(h.value(verts[j]))
        self.vertices = verts
        self.facets = tuple(facets)
        self.gaps = tuple(gaps)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def __eq__(self, other):
        return isinstance(other, Simplex) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        inner = ", ".join("(" + ", ".join(map(str, v)) + ")" for v in self.vertices)
        return f"Simplex([{inner}])"

    @cached_property
    def centroid(self) -> Vector:
        n = self.dim
        return scale(mpq(1, n + 1), vsum(self.vertices, n))

    def barycentric(self, p) -> tuple:
        return barycentric(self, p)

    def point(self, coords: Sequence) -> Vector:
        """Point with the given barycentric coordinates."""
        return vsum((scale(c, v) for c, v in zip(coords, self.vertices)), self.dim)



def barycentric(S: Simplex, p: Sequence) -> tuple:
    if len(p) != S.dim:
        raise DimensionError(f"point of dimension {len(p)} for a simplex in R^{S.dim}")
    p = vec(p)
    return tuple(h.value(p) / g for h, g in zip(S.facets, S.gaps))


def reference_simplex(n: int) -> Simplex:
    """``conv{0, e_1, ..., e_n}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Simplex([zeros(n)] + [unit(n, i) for i in range(n)])


@dataclass(frozen=True)
class Homothet:
    """``translation + coefficient * base``."""

    base: Simplex
    translation: Vector
    coefficient: Rational

    def __post_init__(self):
        object.__setattr__(self, "translation", vec(self.translation))
        object.__setattr__(self, "coefficient", Q(self.coefficient))
        if self.coefficient < 0:
            raise ValueError("homothety coefficient must be nonnegative")
        if len(self.translation) != self.base.dim:
            raise DimensionError("translation dimension does not match the base simplex")

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def vertices(self) -> tuple:
        return tuple(add(self.translation, scale(self.coefficient, v)) for v in self.base.vertices)

    def levels(self) -> tuple:
        """Per facet j, the minimum over the homothet of the j-th base barycentric coordinate."""
        S = self.base
        out = []
        for j, (h, g) in enumerate(zip(S.facets, S.gaps)):
            # every base vertex other than v_j lies on F_j
            other = S.vertices[1 if j == 0 else 0]
            out.append(h.value(add(self.translation, scale(self.coefficient, other))) / g)
        return tuple(out)

    @classmethod
    def from_levels(cls, base: Simplex, levels: Sequence) -> "Homothet":
        """The homothet ``{p : beta_j(p) >= levels[j]}`` of ``base``."""
        levels = vec(levels)
        lam = ONE - sum(levels, ZERO)
        if lam < 0:
            raise ValueError("levels describe an empty region")
        first = [levels[0] + lam] + list(levels[1:])
        w0 = base.point(first)
        return cls(base, sub(w0, scale(lam, base.vertices[0])), lam)

    def __add__(self, other: "Homothet") -> "Homothet":
        if other.base != self.base:
            raise ValueError("homothets of different simplices")
        return Homothet(self.base, add(self.translation, other.translation),
                        self.coefficient + other.coefficient)

    def scaled_about(self, k, center) -> "Homothet":
        """Image under ``x -> center + k (x - center)``."""
        k = Q(k)
        t = add(vec(center), scale(k, sub(self.translation, center)))
        return Homothet(self.base, t, k * self.coefficient)

    def as_simplex(self) -> Simplex:
        return Simplex(self.vertices)


def apply_affine(T: AffineMap, x):
    """Image of a vector, simplex, homothet or circuit under ``x -> Mx + t``."""
    if T.determinant == 0:
        raise SingularMapError("affine map is not invertible")
    if isinstance(x, Simplex):
        if x.dim != T.dim:
            raise DimensionError("dimension mismatch")
        return Simplex([T(v) for v in x.vertices])
    if isinstance(x, Homothet):
        base = apply_affine(T, x.base)
        # T(t + lam v) = T(t) - lam T(0) + lam T(v); base vertices already map through T
        t = sub(T(x.translation), scale(x.coefficient, T.translation))
        return Homothet(base, t, x.coefficient)
    if hasattr(x, "map_points"):
        if x.dim != T.dim:
            raise DimensionError("dimension mismatch")
        return x.map_points(T)
    if len(x) != T.dim:
        raise DimensionError("dimension mismatch")
    return T(vec(x))
