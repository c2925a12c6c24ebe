import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpkato.errors import DomainError
from sharpkato.gamma import (
    a_condition_margin,
    b_positive_sufficient,
    certificate,
    coefficients,
    cubic,
    feasible_gamma_interval,
    find_certificate,
    gamma_at_p0_closed_form,
    gamma_lower_bound,
    gamma_vertex,
    p0_cardano,
    p0_cubic,
    quartic,
    raw_coefficients,
    region_scan,
)

# Frozen values: real root of the cubic and the vertex there.
P0 = 2.642736675907501
GAMMA_STAR = -0.6087402897044161
P_GAMMA0 = (3 + math.sqrt(3)) / 2


def test_coefficients_p2_gamma0():
    a, b, c = coefficients(2, 0)
    assert a == pytest.approx(1 / 6, abs=1e-15)
    assert b == pytest.approx(0.5, abs=1e-15)
    assert c == pytest.approx(1.5, abs=1e-15)


def test_coefficients_domain():
    with pytest.raises(DomainError):
        coefficients(2.5, gamma_lower_bound(2.5))
    with pytest.raises(DomainError):
        coefficients(2.5, 0.1)
    with pytest.raises(DomainError):
        coefficients(3.0, -0.5)
    with pytest.raises(DomainError):
        coefficients(1.9, -0.5)


def test_p0_values():
    p0 = p0_cubic()
    assert p0 == pytest.approx(P0, abs=1e-15)
    assert abs(p0 - p0_cardano()) < 1e-12
    assert abs(p0 - 2.6427) < 5e-5
    assert abs(cubic(p0)) < 1e-12
    assert gamma_vertex(p0) == pytest.approx(GAMMA_STAR, abs=1e-15)
    assert abs(gamma_vertex(p0) - (-0.60874)) < 5e-6
    assert gamma_at_p0_closed_form() == pytest.approx(GAMMA_STAR, abs=1e-12)


def test_quartic_factorization():
    ps = np.linspace(-2.0, 5.0, 20)
    err = np.abs(quartic(ps) - (ps - 3) * cubic(ps))
    assert err.max() < 1e-10


def test_at_p0_a_zero_b_positive():
    a, b, c = coefficients(P0, GAMMA_STAR)
    assert abs(a) < 1e-9
    assert b > 0
    assert c > 0
    assert GAMMA_STAR > gamma_lower_bound(P0)


def test_gamma_zero_admissible_exactly_up_to_threshold():
    assert P_GAMMA0 == pytest.approx(2.366, abs=5e-4)
    ps = np.linspace(2.0, 2.999, 5000)
    flags = np.array([certificate(p, 0.0).admissible for p in ps])
    np.testing.assert_array_equal(flags, ps <= P_GAMMA0)
    assert certificate(P_GAMMA0 - 1e-12, 0.0).admissible
    assert not certificate(P_GAMMA0 + 1e-9, 0.0).admissible


def test_feasible_interval_examples():
    lo, hi = feasible_gamma_interval(2.0)
    assert lo <= 0.0 <= hi
    lo, hi = feasible_gamma_interval(P0)
    assert hi - lo < 1e-6
    assert 0.5 * (lo + hi) == pytest.approx(GAMMA_STAR, abs=1e-7)
    assert feasible_gamma_interval(P0 + 0.01) is None


@pytest.mark.parametrize("p", np.linspace(P0 + 1e-6, 2.999, 50))
def test_no_feasible_gamma_beyond_p0(p):
    assert feasible_gamma_interval(p) is None


@pytest.mark.parametrize("p", np.linspace(2.0, P0 - 1e-6, 25))
def test_interval_roots_zero_margin(p):
    lo, hi = feasible_gamma_interval(p)
    assert abs(a_condition_margin(p, lo)) < 1e-12
    assert abs(a_condition_margin(p, hi)) < 1e-12
    assert a_condition_margin(p, 0.5 * (lo + hi)) > 0


def test_margin_sign_matches_a_sign():
    pp, gg = np.meshgrid(np.linspace(2, 2.999, 301), np.linspace(-0.999, 0, 301))
    a, _, _ = raw_coefficients(pp, gg)
    m = a_condition_margin(pp, gg)
    clear = np.abs(m) > 1e-12
    np.testing.assert_array_equal(a[clear] >= 0, m[clear] >= 0)


@given(p=st.floats(2.0, 2.999), g=st.floats(-5.0, 5.0))
def test_vertex_dominates_margin(p, g):
    assert a_condition_margin(p, gamma_vertex(p)) >= a_condition_margin(p, g) - 1e-12


def test_find_certificate_examples():
    cert = find_certificate(2.0)
    assert cert is not None and cert.gamma == 0.0
    assert cert.to_dict() == {"p": 2.0, "gamma": 0.0, "A": cert.a_coef, "B": 0.5, "C": 1.5, "admissible": True}
    assert find_certificate(2.70) is None
    assert find_certificate(P0 + 0.01) is None


def test_find_certificate_covers_interval():
    for p in np.append(np.arange(2.0, P0, 1e-3), P0):
        cert = find_certificate(p)
        assert cert is not None, p
        assert cert.admissible
        assert cert.b_coef > 0
        assert a_condition_margin(cert.p, cert.gamma) >= -1e-12
        assert gamma_lower_bound(p) < cert.gamma <= 0


def test_certificate_uses_named_choices_first():
    assert find_certificate(2.2).gamma == 0.0
    assert find_certificate(2.6).gamma == pytest.approx(GAMMA_STAR, abs=1e-15)


def test_b_sufficient_condition_implies_b_positive():
    for p in np.linspace(2, 2.999, 101):
        for g in np.linspace(gamma_lower_bound(p) + 1e-9, 0, 101):
            if b_positive_sufficient(p, g):
                assert raw_coefficients(p, g)[1] > 0


def test_region_scan_labels():
    scan = region_scan((2.0, 3.0), (-1.0, 0.0), (201, 201))
    j = int(np.argmin(np.abs(scan.p - 2.5)))
    i = int(np.argmin(np.abs(scan.gamma - 0.0)))
    assert scan.a_negative[i, j] and not scan.admissible[i, j]
    resolution = scan.p[1] - scan.p[0]
    assert abs(scan.rightmost_admissible_p() - P0) <= resolution
    # gamma = -0.95 lies at or below -p/(2(p-1)) exactly when p >= 19/9
    i = int(np.argmin(np.abs(scan.gamma + 0.95)))
    np.testing.assert_array_equal(scan.gamma_excluded[i], scan.p >= 19 / 9)


def test_region_scan_curves_on_boundaries():
    scan = region_scan(steps=(51, 51))
    for p, g in scan.curves["A=0"]:
        assert abs(a_condition_margin(p, g)) < 1e-10
    for p, g in scan.curves["B=0"]:
        assert abs(raw_coefficients(p, g)[1]) < 1e-9
    for p, g in scan.curves["gamma_bound"]:
        assert g == gamma_lower_bound(p)
    assert len(scan.curves["A=0"]) > 0 and len(scan.curves["B=0"]) > 0


def test_region_scan_rows_and_domain():
    scan = region_scan(steps=(3, 4))
    rows = list(scan.rows())
    assert len(rows) == 12
    assert rows[0][:2] == (2.0, -1.0)
    with pytest.raises(DomainError):
        region_scan((1.5, 3.0))
