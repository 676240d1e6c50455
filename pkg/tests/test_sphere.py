import math

import pytest

from sgauge.circuit import depth, point, random_circuit
from sgauge.errors import DimensionError, PreconditionError
from sgauge.geometry import Q
from sgauge.sphere import estimate_gap, in_sum_zero, paper_simplex_circuit


def test_paper_simplex_construction():
    P = paper_simplex_circuit(1)
    assert P.dim == 2
    leaves = sorted([P.root.left.coords, P.root.right.coords])
    assert leaves == [(Q("-1/2"), Q("1/2")), (Q("1/2"), Q("-1/2"))]
    for n in range(1, 12):
        P = paper_simplex_circuit(n)
        assert in_sum_zero(P)
        assert depth(P) == math.ceil(math.log2(n + 1))
    with pytest.raises(PreconditionError):
        paper_simplex_circuit(0)


def test_identical_bodies_give_zero():
    P = random_circuit(3, 2, 6, 1)
    est = estimate_gap(P, P, 1000, 5)
    assert est.mean == 0 and est.stderr == 0


def test_determinism_and_symmetry():
    P, Q_ = paper_simplex_circuit(3), point((0, 0, 0, 0))
    a = estimate_gap(P, Q_, 20000, 42)
    assert a == estimate_gap(P, Q_, 20000, 42)
    assert a == estimate_gap(Q_, P, 20000, 42)
    assert a != estimate_gap(P, Q_, 20000, 43)


def test_worker_count_does_not_change_result(monkeypatch):
    P, Q_ = paper_simplex_circuit(4), point((0,) * 5)
    serial = estimate_gap(P, Q_, 30000, 9)
    monkeypatch.setenv("SGAUGE_THREADS", "3")
    assert estimate_gap(P, Q_, 30000, 9) == serial


def test_errors():
    with pytest.raises(DimensionError):
        estimate_gap(point((0, 0)), point((0, 0, 0)), 10, 1)
    with pytest.raises(PreconditionError):
        estimate_gap(point((0, 0)), point((1, 0)), 1, 1)


def test_sum_zero_sampling_is_used():
    # on the sum-zero line of R^2 the support gap is constant
    est = estimate_gap(point((0, 0)), paper_simplex_circuit(1), 5000, 2)
    assert abs(est.mean - 1 / math.sqrt(2)) < 1e-12
    full = estimate_gap(point((0, 0)), paper_simplex_circuit(1), 5000, 2, sum_zero=False)
    assert full.stderr > 1e-3


def test_output_fields():
    obj = estimate_gap(point((0, 0)), point((1, 0)), 100, 7).to_obj()
    assert set(obj) == {"mean", "stderr", "samples", "seed"} and obj["samples"] == 100
