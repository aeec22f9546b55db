import math

import pytest

import urel_euler as ue


def test_state_round_trip():
    w = ue.cons_from_prim(1.0, [1.0, 0.0])
    assert w == pytest.approx([4 * math.sqrt(2), 0.0, 7.0], rel=1e-15)
    p, u = ue.prim_from_cons(w)
    assert p == pytest.approx(1.0, rel=1e-14)
    assert u == pytest.approx([1.0, 0.0], abs=1e-14)


def test_degenerate_state_raises():
    with pytest.raises(ue.DegenerateState):
        ue.cons_from_prim(-1.0, [0.0, 0.0])
    with pytest.raises(ue.UrelError):
        ue.prim_from_cons([1.0, 0.0, -1.0])


def test_ec_flux_consistent_and_symmetric():
    f = ue.ec_flux(2.0, [0.3, -0.4], 2.0, [0.3, -0.4], 1)
    assert f == pytest.approx(ue.physical_flux(2.0, [0.3, -0.4], 1), rel=1e-14)
    a = ue.ec_flux(1.0, [0.1, 0.2, 0.3], 5.0, [-2.0, 0.5, 1.0], 2)
    b = ue.ec_flux(5.0, [-2.0, 0.5, 1.0], 1.0, [0.1, 0.2, 0.3], 2)
    assert a == b


def test_radial_map():
    a, b = ue.theta_map(1.0, 1.0)
    assert (a, b) == pytest.approx((7.0, 4 * math.sqrt(2)), rel=1e-15)
    assert ue.c_of_ab(a, b) == pytest.approx(5.0, rel=1e-14)
    with pytest.raises(ue.InvalidRadialState):
        ue.theta_inv(1.0, 2.0)


def test_table2():
    rows = ue.table2(1e-5)
    assert [r["dim"] for r in rows] == [2, 3]
    assert rows[0]["p_minus"] == pytest.approx(15.75505, abs=1e-4)
    assert rows[1]["s_tilde"] == pytest.approx(0.52314, abs=1e-4)


def test_reference_profile():
    prof = ue.reference_profile("1", 2, 1.0, [0.1, 1e12])
    assert prof["p"][0] == pytest.approx(15.75505, abs=1e-4)
    assert prof["v"][1] == pytest.approx(-1 / math.sqrt(2), rel=1e-9)


def test_small_benchmarks():
    out = ue.run_benchmark("2", 2, "radial", radial_cells=400)
    assert out["t"] == pytest.approx(1.0)
    assert out["report"]["l1_v"] < 0.02
    dg = ue.run_benchmark("1", 2, "dgsem", elements=8, t_end=0.1)
    assert min(dg["profile"]["p"]) > 0.0
    with pytest.raises(ValueError):
        ue.run_benchmark("1", 2, "dgsem", bogus=1)


def test_entropy_experiment():
    r = ue.entropy_experiment(2, 4, 3, 5)
    assert r["passed"]
    assert r["rhs_evaluations"] == 21
    assert len(r["rate"]) == 21
