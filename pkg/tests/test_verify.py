import json

import pytest

from padic_zeros import verify as V
from padic_zeros.forms import Form, are_similar
from padic_zeros.fpsearch import count_and_witness


def test_report_checksum_ignores_timing():
    r = V.TaskReport("t", {"prime": 5}, 10, ["x^4 mod 5"], V.CONFIRMED, wall_ms=12).seal()
    s = V.TaskReport("t", {"prime": 5}, 10, ["x^4 mod 5"], V.CONFIRMED, wall_ms=99999).seal()
    assert r.checksum == s.checksum and len(r.checksum) == 16
    t = V.TaskReport("t", {"prime": 5}, 11, ["x^4 mod 5"], V.CONFIRMED).seal()
    assert t.checksum != r.checksum


def test_report_json_round_trip():
    r = V.TaskReport("t", {"prime": 5}, 10, ["x^4 + y^4 mod 5"], V.REFUTED, 3, {"k": [1, 2]}).seal()
    d = json.loads(json.dumps(r.to_json()))
    assert d["exceptions"] == [{"form": "x^4 + y^4 mod 5", "witness_absent": True}]
    assert V.TaskReport.from_json(d) == r
    assert not r.ok


@pytest.mark.parametrize("p", [2, 5, 7])
def test_cl_small(p):
    rep = V.task_cl(p)
    assert rep.verdict == V.CONFIRMED and rep.exceptions == []
    assert rep.forms_examined == (p - 1) ** 3 * p**3


def test_cl_range_checks():
    with pytest.raises(V.TaskError):
        V.task_cl(3)
    with pytest.raises(V.TaskError):
        V.task_cl(53)


def test_cl_conditions_matter():
    # dropping a c f != 0 lets in forms such as x^3, whose zeros are all singular
    assert count_and_witness(Form.parse("x^3 mod 5", n_vars=3)).nonsingular_witness is None


def test_identities():
    rep = V.task_identities()
    assert rep.verdict == V.CONFIRMED
    assert all(rep.details["checks"].values()) and len(rep.details["checks"]) == 4


@pytest.mark.parametrize("p", [13, 29])
def test_badform(p):
    rep = V.task_badform(p)
    assert rep.verdict == V.AS_EXPECTED
    assert rep.forms_examined == (p - 1) ** 3
    assert len(rep.exceptions) == {13: 324, 29: 1372}[p]
    assert all(Form.parse(e).is_diagonal() for e in rep.exceptions)


def test_badform_range():
    with pytest.raises(V.TaskError):
        V.task_badform(17)


@pytest.mark.parametrize("p,n", [(3, 3), (7, 4), (5, 2), (11, 5)])
def test_bad_family_has_only_singular_zeros(p, n):
    rep = V.task_bad_family(p, n)
    assert rep.verdict == V.CONFIRMED
    assert rep.details["zeros"] == rep.details["singular_zeros"]


def test_bad_form_shape():
    f = V.bad_form(7, 3)
    assert f.coeff((4, 0, 0)) == 1 and f.coeff((2, 2, 0)) == 2 and f.coeff((0, 0, 4)) == (-3) % 7
    with pytest.raises(V.TaskError):
        V.task_bad_family(2, 3)


def test_mykey52():
    rep = V.task_mykey52()
    assert rep.forms_examined == 62500 and rep.exceptions == [] and rep.verdict == V.CONFIRMED


def test_mykey51():
    rep = V.task_mykey51()
    assert rep.verdict == V.AS_EXPECTED
    monos = [(4, 0, 0), (1, 3, 0), (0, 4, 0), (1, 0, 3), (0, 1, 3), (0, 0, 4)]
    got = {tuple(Form.parse(e).coeff(m) for m in monos) for e in rep.exceptions}
    assert len(rep.exceptions) == 64
    assert got == V.mykey51_expected(V.mykey51_family())


def test_mykey51_family_members_are_exceptions():
    # independent check: x^4 + y^4 + d x z^3 + 3 z^4 has no non-singular zero for d != 0
    for d in range(1, 5):
        assert count_and_witness(Form.parse(f"x^4 + y^4 + {d}*x*z^3 + 3*z^4 mod 5")).nonsingular_witness is None
    assert count_and_witness(Form.parse("x^4 + y^4 + 3*z^4 mod 5")).nonsingular_witness is not None


def test_split_quadratics_order_and_count():
    qs = V.split_quadratics(7)
    assert len(qs) == len(set(qs))
    # every q = q0 x^2 + q1 xy + q2 y^2 has non-zero discriminant which is a square
    for q0, q1, q2 in qs:
        disc = (q1 * q1 - 4 * q0 * q2) % 7
        assert disc != 0 and pow(disc, 3, 7) == 1


def test_mykey_case1_p3_and_fast_path():
    rep = V.task_mykey_case1(3)
    assert rep.verdict == V.CONFIRMED
    assert len(rep.details["chosen_q"]) == rep.details["binary_forms"] == 2 * 3 * 2
    slow = V.task_mykey_case1(3, fast=False)
    assert slow.checksum == rep.checksum
    with pytest.raises(V.TaskError):
        V.task_mykey_case1(5)


def test_classify_gf_exception():
    assert V.classify_gf_exception(Form.parse("x^4 + 2*y^4 + 3*z^4 mod 7")) == "diagonal"
    assert V.classify_gf_exception(V.bf_form(13, 1)) == "bf"
    assert V.classify_gf_exception(V.bf_form(11, 1)) is None  # 11 = 3 mod 8
    assert V.classify_gf_exception(Form.parse("x^4 + x*y^3 + z^4 mod 13")) is None


def test_case_helpers():
    f = V.binary_quartic(7, 1, 0, -1)
    xi, one, zero = V.case2_witness(f)
    assert (xi**4 - 1) % 7 == 0 and (one, zero) == (1, 0)
    assert V.case2_witness(V.binary_quartic(5, 1, 0, 1)) is None
    for p in (3, 5, 7, 13, 29):
        assert V.case4_factorisation_holds(p)
    for p, H in [(13, 1), (13, 5), (29, 3), (7, 2)]:
        assert V.case4_bf_relation(p, H)


@pytest.mark.parametrize("p", [13, 19])
def test_quintic_torus_orbits_cover_all_triples(p):
    for shape in V.QUINTIC_SHAPES:
        orbits = V.abc_orbits(p, shape)
        assert len(orbits) == (p - 1) ** 3
        for abc, (rep, el) in orbits.items():
            monos = V.QUINTIC_SHAPES[shape]
            assert tuple(V.torus_act_coeff(p, el, m, c) for m, c in zip(monos, rep)) == abc


def test_quintic_family_counts_p13():
    n = {s: len(V.quintic_representatives(13, s)) for s in V.QUINTIC_SHAPES}
    assert n == {1: 1, 2: 6}


def test_known_quintic_is_an_exception_and_normalises():
    f = Form.parse(V.KNOWN_QUINTIC_13)
    assert V.shape_of_quintic(f) == 2
    assert count_and_witness(f).nonsingular_witness is None
    g = V.normalise_quintic(f, 2)
    assert are_similar(f, g)
    assert count_and_witness(g).nonsingular_witness is None
    orbit = V.quintic_slice_orbit(f)
    assert g.literal() in orbit
    for lit in sorted(orbit)[:5]:
        assert count_and_witness(Form.parse(lit)).nonsingular_witness is None


def test_quintic_range():
    with pytest.raises(V.TaskError):
        V.task_quintic(11)
    with pytest.raises(V.TaskError):
        V.task_quintic(47)


def test_beta_search_small():
    rep = V.task_beta_search(1, 3, 5, 0)
    assert rep.verdict == V.NO_CANDIDATE and rep.forms_examined == 0
    rep = V.task_beta_search(1, 3, 5, 50, seed=1)
    assert rep.verdict == V.NO_CANDIDATE
    assert V.task_beta_search(1, 3, 5, 50, seed=1).checksum == rep.checksum
    with pytest.raises(V.TaskError):
        V.task_beta_search(1, 3, 4, 10)
    with pytest.raises(V.TaskError):
        V.task_beta_search(1, 2, 5, 10)


def test_common_zero_mod_p2_detects_anisotropic_binary():
    import numpy as np
    from padic_zeros.fpsearch import projective_point_array

    # x^2 - 2 y^2 over Z_3 (2 is a non-residue): no zero mod 3 at all
    mats = np.array([[[1, 0], [0, -2]]])
    assert not V._common_zero_mod_p2(mats, 3, np.array(projective_point_array(3, 2)))
    # x^2 - y^2: non-singular zeros
    mats = np.array([[[1, 0], [0, -1]]])
    assert V._common_zero_mod_p2(mats, 3, np.array(projective_point_array(3, 2)))


def test_sweep_checksum_independent_of_workers(workers_env):
    a = V.task_cl(5, workers=1)
    b = V.task_cl(5, workers=2)
    assert a.checksum == b.checksum
    a = V.task_mykey52(workers=1)
    b = V.task_mykey52(workers=2)
    assert a.checksum == b.checksum
