import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import grid_points, points
from sgauge.circuit import (
    Circuit,
    Point,
    Sum,
    Union,
    candidate_count,
    candidate_vertices,
    depth,
    hull,
    minkowski_sum,
    parse_circuit,
    random_circuit,
    serialize_circuit,
    simplex_power_construction,
    stats,
    support,
    support_float,
    zonotope,
)
from sgauge.errors import CandidateLimitError, CircuitFormatError, DimensionError, MalformedRationalError, PreconditionError
from sgauge.geometry import AffineMap, Q, apply_affine, dot, matvec, reference_simplex, scale


def brute_support(P, w):
    return max(dot(v, w) for v in candidate_vertices(P))


def test_support_examples():
    P = Circuit(2, Union(Point((0, 0)), Point((1, 0))))
    assert support(P, (1, 0)) == 1
    assert support(Circuit(2, Sum((Point((1, 0)), Point((0, 1))))), (1, 1)) == 2
    with pytest.raises(DimensionError):
        support(P, (1, 0, 0))


@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(0, 3), st.data())
def test_support_matches_candidate_oracle(seed, n, d, data):
    P = random_circuit(n, d, 8, seed)
    if candidate_count(P) > 10**4:
        return
    for _ in range(5):
        w = data.draw(points(n))
        assert support(P, w) == brute_support(P, w)


@given(st.integers(0, 2**32), st.integers(1, 3), st.data())
def test_sum_union_homogeneity_laws(seed, n, data):
    A = random_circuit(n, 2, 8, seed)
    B = random_circuit(n, 1, 8, seed + 1)
    w = data.draw(points(n))
    c = Q(int(data.draw(st.integers(1, 9)))) / 7
    assert support(A + B, w) == support(A, w) + support(B, w)
    assert support(Circuit(n, Union(A.root, B.root)), w) == max(support(A, w), support(B, w))
    assert support(A, scale(c, w)) == c * support(A, w)


def test_depth_examples():
    assert depth(hull([(1, 2)])) == 0
    assert depth(zonotope([((0, 0), (1, 0)), ((0, 0), (0, 1))])) == 1
    for n, d in [(3, 1), (3, 2), (7, 2), (15, 3), (15, 4)]:
        P = simplex_power_construction(n, d)
        assert depth(P) == d
        assert len(candidate_vertices(P)) == 2**d
    assert {tuple(v) for v in candidate_vertices(simplex_power_construction(3, 2))} == set(reference_simplex(3).vertices)
    with pytest.raises(PreconditionError):
        simplex_power_construction(3, 3)


def test_stats_and_union_depth():
    P = hull([(0,), (1,), (2,), (3,), (4,)])
    s = stats(P)
    assert s.depth == 3 and s.leaf_count == 5
    assert depth(Circuit(1, Sum((P.root, Point((1,)))))) == 3


def test_candidate_vertices():
    Z = zonotope([((0, 0), (1, 0)), ((0, 0), (0, 1))])
    assert sorted(candidate_vertices(Z)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert candidate_vertices(Circuit(1, Union(Point((2,)), Point((5,))))) == [(2,), (5,)]
    big = zonotope([((0,), (1,))] * 25)
    assert candidate_count(big) == 2**25
    with pytest.raises(CandidateLimitError):
        candidate_vertices(big, cap=1000)


def test_random_circuit_contract():
    for seed in range(200):
        P = random_circuit(2, 1, 8, seed)
        assert depth(P) <= 1
        assert len(set(candidate_vertices(P))) >= 2
    a = serialize_circuit(random_circuit(3, 3, 5, 99))
    assert a == serialize_circuit(random_circuit(3, 3, 5, 99))


def test_random_leaves_on_grid():
    P = random_circuit(3, 2, 5, 7)
    stack = [P.root]
    while stack:
        nd = stack.pop()
        if isinstance(nd, Point):
            assert all(abs(c.numerator) <= 5 and 1 <= c.denominator <= 5 for c in nd.coords)
        else:
            stack.extend(nd.children)


def test_parse_examples():
    P = parse_circuit('{"dim":2,"root":{"op":"point","coords":["1/2","-3"]}}')
    assert P.root == Point((Q("1/2"), Q(-3)))
    with pytest.raises(MalformedRationalError, match="malformed rational"):
        parse_circuit('{"dim":1,"root":{"op":"point","coords":["1/0"]}}')
    bad = [
        '{"dim":2,"root":{"op":"point","coords":["1"]}}',
        '{"dim":1,"root":{"op":"hull","args":[]}}',
        '{"dim":1,"root":{"op":"union","args":[{"op":"point","coords":["1"]}]}}',
        '{"dim":1,"root":{"op":"sum","args":[]}}',
        "not json",
    ]
    for text in bad:
        with pytest.raises((CircuitFormatError, DimensionError)):
            parse_circuit(text)


def test_serialize_key_order():
    text = serialize_circuit(hull([(0, 1), (1, 0)]))
    assert text.startswith('{"dim":2,"root":{"op":"union","args":[{"op":"point","coords":["0","1"]}')
    assert json.loads(text)["dim"] == 2


def test_round_trip_random():
    for seed in range(100):
        P = random_circuit(1 + seed % 4, seed % 4, 8, seed)
        text = serialize_circuit(P)
        Q_ = parse_circuit(text)
        assert Q_ == P and serialize_circuit(Q_) == text


@given(st.integers(0, 2**32), st.integers(1, 4), st.data())
def test_zonotope_symmetry(seed, n, data):
    rng = np.random.default_rng(seed)
    gens = [tuple(grid_points(rng, n, 2)) for _ in range(int(rng.integers(1, 5)))]
    Z = zonotope(gens)
    c = tuple(sum((a[i] + b[i] for a, b in gens), Q(0)) / 2 for i in range(n))
    w = data.draw(points(n))
    negw = tuple(-x for x in w)
    assert support(Z, w) - dot(c, w) == support(Z, negw) - dot(c, negw)


def test_float_support_agrees_with_exact(rng):
    for seed in range(30):
        P = random_circuit(3, 2, 8, seed)
        W = grid_points(rng, 3, 20)
        X = np.array([[float(c) for c in w] for w in W])
        approx = support_float(P, X)
        for w, a in zip(W, approx):
            exact = float(support(P, w))
            assert abs(a - exact) <= 1e-12 * max(1.0, abs(exact))


def test_affine_image_of_circuit(rng):
    T = AffineMap(((2, 1), (0, 1)), (Q(1), Q(-3)))
    P = random_circuit(2, 2, 8, 5)
    img = apply_affine(T, P)
    assert sorted(set(candidate_vertices(img))) == sorted({T(v) for v in candidate_vertices(P)})
    for w in grid_points(rng, 2, 10):
        # h_{T(P)}(w) = h_P(M^T w) + <t, w>
        mt_w = matvec([[2, 0], [1, 1]], w)
        assert support(img, w) == support(P, mt_w) + dot(T.translation, w)


def test_minkowski_sum_dimension_check():
    with pytest.raises(DimensionError):
        minkowski_sum([hull([(0,)]), hull([(0, 0)])])
