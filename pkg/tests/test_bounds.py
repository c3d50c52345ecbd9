import math

import numpy as np
import pytest

from designbounds import bounds, codes, innerprod
from designbounds.errors import RangeError
from designbounds.levenshtein import quadrature_rule
from designbounds.orthopoly import Poly, gegenbauer_poly
from designbounds.potentials import make_gauss, make_poly, make_riesz

R1 = make_riesz(1.0)
R2 = make_riesz(2.0)
R3 = make_riesz(3.0)
G1 = make_gauss(1.0)


def test_lp_certify_lower_accepts_ulb_interpolant():
    rep = bounds.ulb(3, 7, 3, R2)
    f = rep.certificate.poly
    check = bounds.lp_certify_lower(f, 3, 3, (-1.0, 1.0 - 1e-9), R2, 7)
    assert check.accepted
    assert check.value == pytest.approx(rep.value, rel=1e-10)


def test_lp_certify_lower_rejections():
    # a polynomial above h fails the sign condition
    rep = bounds.lp_certify_lower(Poly([100.0]), 3, 2, (-1.0, 0.9), R2, 5)
    assert not rep.accepted
    assert any("A1" in note for note in rep.notes)
    # a negative high-degree Gegenbauer coefficient fails the tail condition
    rep = bounds.lp_certify_lower(-1.0 * gegenbauer_poly(3, 3), 3, 2, (-1.0, -0.99), R2, 5)
    assert not rep.accepted
    assert any("A2" in note for note in rep.notes)


def test_lp_certify_upper_mirror():
    chord = Poly([1.0])
    rep = bounds.lp_certify_upper(chord, 3, 2, (-0.5, 0.0), R2, 5)
    assert rep.accepted
    rep = bounds.lp_certify_upper(Poly([-100.0]), 3, 2, (-0.5, 0.0), R2, 5)
    assert not rep.accepted and any("B1" in note for note in rep.notes)
    rep = bounds.lp_certify_upper(gegenbauer_poly(3, 3), 3, 2, (0.99, 0.999), R2, 5)
    assert not rep.accepted and any("B2" in note for note in rep.notes)


def test_ulb_octahedron_sharp():
    rep = bounds.ulb(3, 6, 3, R2)
    assert rep.value == pytest.approx(13.5, abs=1e-12)
    assert rep.accepted and rep.verify()


def test_ulb_known_even_value():
    # rule (-1, -1/9) with weights (1/8, 27/40)
    rep = bounds.ulb(3, 5, 2, R2)
    assert rep.value == pytest.approx(8.375, abs=1e-12)


def test_ulb_tau1_closed_form():
    N = 4.0
    rep = bounds.ulb(4, N, 1, R3)
    want = N * (N - 1) * float(R3.eval(-1.0 / (N - 1)))
    assert rep.value == pytest.approx(want, rel=1e-12)


def test_ulb_range_error():
    with pytest.raises(RangeError):
        bounds.ulb(3, 100, 3, R2)


def test_improved_even_lower_strictly_beats_ulb():
    rep = bounds.improved_even_lower(3, 5, 1, R2)
    assert rep.accepted
    assert rep.value > rep.margins["ulb_value"] + 1e-6


def test_improved_even_lower_ell_minus_one_degenerates():
    rep = bounds.improved_even_lower(3, 5, 1, R2, ell=-1.0)
    assert rep.value == pytest.approx(bounds.ulb(3, 5, 2, R2).value, rel=1e-12)
    assert any("degenerates" in note for note in rep.notes)


def test_improved_even_lower_range():
    with pytest.raises(RangeError):
        bounds.improved_even_lower(3, 4, 1, R2)


def test_lower_2design_values():
    assert bounds.lower_2design(3, 5, R2).value == pytest.approx(8.5, abs=1e-12)
    assert bounds.lower_2design(4, 6, R2).value == pytest.approx(13.0, abs=1e-12)
    # N = n+1 collapses to the simplex energy
    assert bounds.lower_2design(3, 4, R2).value == pytest.approx(4.5, abs=1e-12)
    with pytest.raises(RangeError):
        bounds.lower_2design(3, 7, R2)


def test_lower_2design_custom_kappa():
    # looser intersection points (below the admissible minimum 1 - N/n)
    # give valid but weaker bounds
    default = bounds.lower_2design(3, 5, R2)
    for kappa in (-0.8, -0.95):
        rep = bounds.lower_2design(3, 5, R2, kappa=kappa)
        assert rep.accepted
        assert rep.value <= default.value + 1e-9


def test_upper_2design_values():
    assert bounds.upper_2design(3, 5, R2).value == pytest.approx(8.5, abs=1e-12)
    rep = bounds.upper_2design(3, 4, R2)
    assert rep.value == pytest.approx(12 * float(R2.eval(-1.0 / 3.0)), abs=1e-12)
    assert any("exact energy" in note for note in rep.notes)
    assert bounds.upper_2design(6, 8, R2).value >= bounds.lower_2design(6, 8, R2).value - 1e-12
    with pytest.raises(RangeError):
        bounds.upper_2design(3, 6, R2)


def test_upper_cubic_tau4():
    rep = bounds.upper_cubic(4, 14, 4, R2)
    assert rep.accepted and rep.verify()
    assert rep.value >= bounds.ulb(4, 14, 4, R2).value - 1e-9


def test_upper_cubic_constant_potential():
    c = make_poly(Poly([2.5]))
    rep = bounds.upper_cubic(4, 14, 4, c)
    assert rep.value == pytest.approx(14 * 13 * 2.5, rel=1e-12)


def test_upper_cubic_tau3_needs_u():
    with pytest.raises(RangeError):
        bounds.upper_cubic(3, 6, 3, R2)
    rep = bounds.upper_cubic(3, 6, 3, R2, u_override=0.0)
    assert rep.value >= 13.5 - 1e-9
    with pytest.raises(RangeError):
        bounds.upper_cubic(3, 4, 5, R2)


def test_strip_odd_collapse_at_octahedron():
    rep = bounds.strip_odd(3, 6, 3, R2, 0.0)
    assert rep.value == pytest.approx(13.5, abs=1e-10)
    assert rep.accepted and rep.verify()


def test_strip_odd_above_ulb_and_certified():
    rep = bounds.strip_odd(4, 10, 3, R3, 0.4)
    assert rep.accepted
    assert rep.value >= rep.margins["ulb_value"] - 1e-9
    check = bounds.lp_certify_upper(rep.certificate.poly, 4, 3, (-1.0, 0.4), R3, 10)
    assert check.accepted


def test_strip_odd_rejects_bad_u():
    rule = quadrature_rule(4, 3, 10)
    with pytest.raises(RangeError):
        bounds.strip_odd(4, 10, 3, R2, rule.nodes[-1] - 0.05)
    with pytest.raises(RangeError):
        bounds.strip_odd(4, 10, 3, R2, 1.0)
    with pytest.raises(RangeError):
        bounds.strip_odd(3, 5, 2, R2, 0.5)


def test_test_function_values():
    assert bounds.test_function(3, 1, 4, 2) == pytest.approx(0.0, abs=1e-12)
    assert bounds.test_function(3, 1, 4, 3) == pytest.approx(5.0 / 9.0, abs=1e-12)
    with pytest.raises(RangeError):
        bounds.test_function(3, 2, 5, 1)
    with pytest.raises(RangeError):
        bounds.test_function(3, 1, 4, 0)


def test_test_table():
    table = bounds.test_table(3, 3, 7, 6)
    for j in (1, 2, 3):
        assert table.q(j) == pytest.approx(0.0, abs=1e-9)
    assert len(table.values) == 6
    assert table.to_json()["Q"]["1"] == table.q(1)


def test_k0_threshold():
    assert bounds.k0_threshold(9) == pytest.approx(18.0, abs=1e-12)
    assert bounds.k0_threshold(10) == pytest.approx((65 + math.sqrt(1665)) / 4, abs=1e-12)
    vals = [bounds.k0_threshold(k) for k in range(9, 16)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    with pytest.raises(RangeError):
        bounds.k0_threshold(8)


def test_improve_with_degree_rejects_positive_Q():
    rep = bounds.improve_with_degree(3, 4, 1, R2, 3)
    assert not rep.accepted
    assert any("Q_3" in note for note in rep.notes)


def test_improve_with_degree_small_case():
    n, tau, N, j = 3, 3, 7.5, 6
    qj = bounds.test_function(n, tau, N, j)
    assert qj < 0
    rep = bounds.improve_with_degree(n, N, tau, G1, j)
    assert rep.accepted
    ulb_val = rep.margins["ulb_value"]
    assert rep.value >= ulb_val
    expect = rep.margins["eps"] * N * N * abs(qj)
    assert rep.value - ulb_val == pytest.approx(expect, abs=1e-8 * max(1.0, abs(ulb_val)))


def test_strip2_asym_forms():
    lo, up = bounds.strip2_asym(1.5, R2, 100.0)
    h0, hm, hp = 0.5, float(R2.eval(-0.5)), float(R2.eval(0.5))
    assert lo == pytest.approx(h0 + (hm - 1.5 * h0) / (-0.5 * 100))
    assert up == pytest.approx((hm + hp) / 2 + (0.5 * hm - 1.5 * hp) / (1.0 * 100))
    with pytest.raises(RangeError):
        bounds.strip2_asym(2.5, R2, 10.0)


def test_upper4_asym_finite_at_half():
    v = bounds.upper4_asym(0.5, R2, 1e4)
    assert math.isfinite(v)
    with pytest.raises(RangeError):
        bounds.upper4_asym(0.4, R2, 1e4)


def test_ulb_asym_main():
    assert bounds.ulb_asym_main(R2, 10.0) == pytest.approx(50.0)


def test_report_json_round_trip():
    rep = bounds.ulb(3, 6, 3, R2)
    d = rep.to_json()
    assert d["spec"] == {"n": 3, "tau": 3, "N": 6}
    assert d["side"] == "lower" and d["method"] == "ulb"
    assert d["certificate"]["relation"] == "below"
    assert d["potential"] == "riesz:s=2.0"
    assert d["accepted"] is True


def test_strip_ordering_across_methods():
    for (n, N) in [(4, 6), (5, 8), (6, 9)]:
        lo = max(
            bounds.ulb(n, N, 2, R2).value,
            bounds.lower_2design(n, N, R2).value,
        )
        up = bounds.upper_2design(n, N, R2).value
        assert lo <= up + 1e-9
    # sharp designs sit inside their strips
    e = codes.energy(codes.orthogonal_simplices(3, 3), R2)
    assert bounds.lower_2design(4, 6, R2).value <= e + 1e-9
    assert e <= bounds.upper_2design(4, 6, R2).value + 1e-9
