import json

import numpy as np
import pytest

from sgauge.circuit import from_obj, hull, to_obj, zonotope
from sgauge.distances import distance_report
from sgauge.errors import PreconditionError
from sgauge.geometry import Q, reference_simplex
from sgauge.suites import (
    EVALUATORS,
    TrialLog,
    check_de_inf,
    check_depth_law,
    check_io_e_bounds,
    check_negative_sharpness,
    check_sum_laws,
    check_symmetric_law,
    check_union_laws,
    is_negative_homothet,
    random_body,
    replay,
    run_suite,
    run_trial,
)


@pytest.mark.parametrize(
    "runner,args",
    [
        (check_sum_laws, (2, 30, 1)),
        (check_union_laws, (3, 40, 2)),
        (check_symmetric_law, (3, 40, 3)),
        (check_depth_law, (3, 1, 60, 4)),
        (check_io_e_bounds, (2, 20, 5)),
        (check_de_inf, (2, 40, 6)),
        (check_negative_sharpness, (3, 40, 7)),
    ],
)
def test_small_suites_pass(runner, args):
    report = runner(*args)
    assert report.ok, report.to_obj()
    assert report.passed + report.failed == report.params["trials"]


def test_depth_precondition():
    with pytest.raises(PreconditionError):
        check_depth_law(3, 2, 10, 1)
    with pytest.raises(PreconditionError):
        check_depth_law(3, 0, 10, 1)


def test_reports_are_deterministic():
    a = run_suite("union", 2, 15, 11).to_obj()
    b = run_suite("union", 2, 15, 11).to_obj()
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b


def test_sum_law_examples():
    S = reference_simplex(2)
    L1, L2 = hull([(0, 0), (1, 0)]), hull([(0, 0), (0, 1)])
    q, violations = EVALUATORS["sum"]({"n": 2, "operands": [to_obj(L1), to_obj(L2)]})
    assert not violations
    assert q["sum"]["d_io"] == "1" and max(r["d_io"] for r in q["operands"]) == "1"
    T = to_obj(hull(S.vertices))
    q, violations = EVALUATORS["sum"]({"n": 2, "operands": [T, T]})
    assert not violations
    assert q["sum"]["d_io"] == q["operands"][0]["d_io"] and q["sum"]["co_d_e"] == q["operands"][0]["co_d_e"]


def test_union_law_examples():
    P = to_obj(random_body(3, np.random.default_rng(3)))
    q, violations = EVALUATORS["union"]({"n": 3, "operands": [P, P]})
    assert not violations and q["union"]["co_d_e"] == q["operands"][0]["co_d_e"]
    # two tiny simplex homothets at different vertices
    S = reference_simplex(2)
    tiny = [hull([tuple(v[i] + Q(1) / 10 * w[i] for i in range(2)) for w in S.vertices]) for v in S.vertices[:2]]
    q, violations = EVALUATORS["union"]({"n": 2, "operands": [to_obj(t) for t in tiny]})
    assert not violations
    assert all(r["co_d_e"] == "3" for r in q["operands"])


def test_symmetric_examples():
    S = reference_simplex(2)
    assert distance_report(S, zonotope([((0, 0), (1, 0)), ((0, 0), (0, 1))]), inner=False).d_e == 1
    assert distance_report(S, hull([(0, 0), (3, 1)]), inner=False).d_e == 1
    report = check_symmetric_law(4, 50, 9)
    assert report.ok


def test_io_equality_witnesses_recorded():
    report = check_io_e_bounds(3, 5, 1)
    assert set(report.extras) == {"negative simplex over n", "reference simplex", "two points on an edge"}
    assert all(log.verdict for log in report.extras.values())
    neg = report.extras["negative simplex over n"].quantities["body"]
    assert neg["lambda_outer"] == "1" and neg["lambda_inner"] == "1/9"


def test_negative_homothet_detection():
    S = reference_simplex(3)
    assert is_negative_homothet(hull([tuple(-2 * c for c in v) for v in S.vertices]))
    assert not is_negative_homothet(hull(S.vertices))


def test_failing_trial_is_replayable():
    # a forged log with wrong stored verdict re-evaluates to the true one
    inst = {"n": 2, "body": to_obj(hull([(0, 0), (1, 0), (0, 1)]))}
    log = TrialLog("symmetric", 0, inst, {}, ["forged"])
    again = replay(log)
    assert again.violations == ["d_e equals n-1"]
    assert replay(TrialLog.from_obj(json.loads(json.dumps(again.to_obj())))).quantities == again.quantities


def test_replay_reproduces_quantities():
    report = run_suite("deinf", 2, 5, 3)
    log = run_trial("deinf", 2, report.params, 0)
    assert replay(log).quantities == log.quantities
    assert from_obj(log.instance["body"]).dim == 2


def test_process_pool_matches_serial():
    a = run_suite("symmetric", 2, 12, 5, workers=1).to_obj()
    b = run_suite("symmetric", 2, 12, 5, workers=2).to_obj()
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b
