import math

import pytest

import latslice as ls


def test_staircase_counts():
    stairs = ls.gen_parabolic_staircase(32)
    assert len(stairs) == 32 * 33 // 2
    for n in (1, 5, 32):
        assert ls.box_count(stairs, ls.BoxSpec.first_quadrant(n * n)) == n * (n + 1) // 2
        assert ls.staircase_box_count(32, n * n) == n * (n + 1) // 2


def test_tube_width_and_membership():
    t = ls.Tube.standard(2.0, 3.0)
    assert abs(t.edge_distance() - 1.0) < 1e-12
    k = math.sqrt(1.0 + 0.25)
    assert t.contains(0.0, 4.0 * k)
    assert not t.contains(0.0, 3.0 * k)
    with pytest.raises(ValueError):
        ls.Tube.standard(0.0, 1.0)


def test_profile_is_a_dict():
    line = ls.gen_unit_line(1.0, 2048)
    prof = ls.mass_dim_profile(line, ls.dyadic_scales(1024))
    assert set(prof) >= {"scales", "counts", "ratios", "estimate"}
    assert 0.9 <= prof["estimate"] <= 1.1


def test_finite_field_identity():
    b = ls.FiniteFieldSet.random(13, 0.4, 9)
    assert ls.ff_double_count(b) == len(b) * 13
    assert ls.ff_chebyshev_fraction(b, 3.0)["holds"]
    assert ls.ff_affine_intersection(11, [1, 3, 4, 8], [1, 3, 4, 8], 1, 0) == 4


def test_run_matches_across_calls():
    params = {"generator": {"kind": "parabolic_staircase", "params": {"M": 16}}, "scales": "dyadic:256"}
    a = ls.run("dim", params)
    b = ls.run("dim", params)
    assert a["results"] == b["results"]
    assert a["results"]["profile"]["counts"][-1] == 16 * 17 // 2
    with pytest.raises(ValueError):
        ls.run("dim", {"generator": params["generator"], "scale": "dyadic:8"})


def test_survey_within_bound():
    pts = ls.PointSet([(float(x), float(y)) for x in range(17) for y in range(17)])
    r = ls.survey_floor_lines(pts, N=16, M=16.0, grid_u=32, grid_v=32)
    assert r["mean"] <= r["bound"] + r["resolution_term"]
