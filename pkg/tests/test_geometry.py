from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import grid_points, points, rationals
from sgauge.errors import DimensionError, MalformedRationalError, SingularMapError
from sgauge.geometry import (
    AffineMap,
    Homothet,
    Hyperplane,
    Q,
    Simplex,
    affine_rank,
    apply_affine,
    barycentric,
    det,
    format_rational,
    inverse,
    oriented_distance,
    parse_rational,
    reference_simplex,
)


@pytest.mark.parametrize("text,value", [("3", Fraction(3)), ("-3/7", Fraction(-3, 7)), ("4/8", Fraction(1, 2)), ("0", 0)])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/0", " 1", "1 /2", "1.5", "", "--1", "1/-2", "a"])
def test_parse_rational_rejects(text):
    with pytest.raises(MalformedRationalError, match="malformed rational"):
        parse_rational(text)


@given(rationals(50))
def test_rational_text_round_trip(x):
    assert parse_rational(format_rational(x)) == x
    assert x.denominator > 0


def test_floats_are_refused():
    with pytest.raises(TypeError):
        Q(0.5)


def test_reference_simplex_facets():
    S = reference_simplex(2)
    assert S.vertices == ((0, 0), (1, 0), (0, 1))
    h0 = S.facets[0]
    assert h0.normal == (-1, -1) and h0.offset == -1
    S1 = reference_simplex(1)
    assert S1.vertices == ((0,), (1,))
    assert {(h.normal, h.offset) for h in S1.facets} == {((-1,), -1), ((1,), 0)}


def random_simplex(seed, n):
    rng = np.random.default_rng(seed)
    while True:
        verts = grid_points(rng, n, n + 1)
        if affine_rank(verts) == n:
            return Simplex(verts)


@given(st.data(), st.integers(0, 2**32), st.integers(1, 5))
def test_facet_consistency_and_barycentric(data, seed, n):
    S = random_simplex(seed, n)
    for j, (h, g) in enumerate(zip(S.facets, S.gaps)):
        for k, v in enumerate(S.vertices):
            if k != j:
                assert h.value(v) == 0
        assert h.value(S.vertices[j]) == g > 0
        assert all(isinstance(c, int) or c.denominator == 1 for c in h.normal)
    p = data.draw(points(n))
    alpha = barycentric(S, p)
    assert sum(alpha) == 1
    recon = tuple(sum(a * v[i] for a, v in zip(alpha, S.vertices)) for i in range(n))
    assert recon == p
    for j, h in enumerate(S.facets):
        assert oriented_distance(p, h) / oriented_distance(S.vertices[j], h) == alpha[j]


def test_barycentric_examples():
    S = reference_simplex(2)
    assert barycentric(S, (1, 0)) == (0, 1, 0)
    third = Q("1/3")
    assert barycentric(S, (third, third)) == (third, third, third)
    with pytest.raises(DimensionError):
        barycentric(S, (1, 2, 3))


def test_oriented_distance_examples():
    h = Hyperplane((1, 0), 1)
    assert oriented_distance((0, 0), h) == -1
    assert oriented_distance((1, 5), h) == 0


@given(st.data(), st.integers(1, 4))
def test_det_and_inverse_match_sympy(data, n):
    rows = [list(data.draw(points(n, 6))) for _ in range(n)]
    M = sympy.Matrix([[sympy.Rational(int(c.numerator), int(c.denominator)) for c in r] for r in rows])
    assert det(rows) == Fraction(str(M.det()))
    if M.det() != 0:
        inv = inverse(rows)
        Mi = M.inv()
        assert all(inv[i][j] == Fraction(str(Mi[i, j])) for i in range(n) for j in range(n))


def test_homothet_levels_round_trip():
    S = reference_simplex(3)
    H = Homothet(S, (Q(1), Q(-2), Q("1/3")), Q("5/2"))
    assert Homothet.from_levels(S, H.levels()) == H
    assert 1 - sum(H.levels()) == H.coefficient


def test_apply_affine_examples():
    S = reference_simplex(2)
    assert apply_affine(AffineMap.identity(2), S) == S
    double = AffineMap(((2, 0), (0, 2)), (0, 0))
    assert apply_affine(double, S).vertices == ((0, 0), (2, 0), (0, 2))
    with pytest.raises(SingularMapError):
        apply_affine(AffineMap(((1, 1), (1, 1)), (0, 0)), S)
