"""Exit criteria, one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python3 tests/test_acceptance.py``.
"""
import math
import sys
import time

import numpy as np
import pytest

from sharpkato import appendix, gamma, reports, suites
from sharpkato.closed_form_maps import (
    equator_projection_jet,
    equator_projection_map,
    finite_difference_jet,
    radial_power_jet,
    radial_power_map,
)
from sharpkato.jets import build_extremal_jet, kato_ratio, verify_p_harmonic
from sharpkato.kato_core import Regime, kappa, kappa_oracle, regime_bounds
from sharpkato.regularity import gate_conditions, max_p_regular, n0

SEED = 20240917


@pytest.fixture
def report(capsys):
    def _report(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        assert ok, detail

    return _report


def test_criterion_01_closed_form_vs_oracle(report):
    start = time.perf_counter()
    worst = 0.0
    for p in np.round(np.arange(1.1, 6.0 + 1e-9, 0.01), 10):
        for n in range(2, 11):
            worst = max(worst, abs(kappa(p, n).value - kappa_oracle(p, n)[0]))
    elapsed = time.perf_counter() - start
    report(1, worst < 1e-8 and elapsed < 30.0, f"max |kappa - oracle| = {worst:.3e} (< 1e-8), {elapsed:.1f} s (< 30 s)")


def test_criterion_02_exact_values(report):
    exact = kappa(2, 3).value == 1.5
    ps = np.linspace(1.001, 6.0, 5000)
    worst = max(abs(kappa(p, 2).value - min(1 + (p - 1) ** 2, 2.0)) for p in ps)
    report(2, exact and worst < 1e-12, f"kappa(2,3) == 1.5: {exact}; max n=2 collapse error {worst:.3e} (< 1e-12)")


def test_criterion_03_c1_matching(report):
    h = 1e-6
    worst = 0.0
    for n in range(3, 11):
        k = lambda p: kappa(p, n).value
        for b in regime_bounds(n):
            left = (3 * k(b) - 4 * k(b - h) + k(b - 2 * h)) / (2 * h)
            right = (-3 * k(b) + 4 * k(b + h) - k(b + 2 * h)) / (2 * h)
            worst = max(worst, abs(left - right))
    report(3, worst < 1e-5, f"max one-sided derivative mismatch {worst:.3e} (< 1e-5)")


def test_criterion_04_extremal_jets(report):
    rng = np.random.default_rng(SEED)
    worst_res = worst_gap = 0.0
    regimes = set()
    for _ in range(200):
        n = int(rng.integers(2, 11))
        lo, hi = regime_bounds(n)
        # thirds of the draws land in each regime
        which = rng.integers(3)
        if which == 0:
            p = rng.uniform(1.01, lo)
        elif which == 1 and n > 2:
            p = rng.uniform(lo, hi)
        else:
            p = rng.uniform(hi, hi + 3.0)
        jet = build_extremal_jet(p, n)
        regimes.add(kappa(p, n).regime)
        worst_res = max(worst_res, verify_p_harmonic(jet, p))
        worst_gap = max(worst_gap, abs(kato_ratio(jet) - kappa(p, n).value))
    ok = worst_res < 1e-12 and worst_gap < 1e-9 and regimes == set(Regime)
    report(4, ok, f"residual {worst_res:.2e} (< 1e-12), |ratio - kappa| {worst_gap:.2e} (< 1e-9), "
                  f"regimes {sorted(r.value for r in regimes)}")


def test_criterion_05_sampled_kato(report):
    result = suites.kato_sampling(100_000, SEED)
    mins = []
    for p, n, d in suites.KATO_CONFIGS:
        found, k = suites.local_minimum_near_extremal(p, n, d)
        mins.append(abs(found - k))
    violations = sum(c["violations"] for c in result["configs"])
    evaluated = [c["evaluated"] for c in result["configs"]]
    ok = result["passed"] and violations == 0 and max(mins) < 1e-6
    report(5, ok, f"violations {violations} over {evaluated} jets; local-min |ratio - kappa| max {max(mins):.2e} (< 1e-6)")


def _fd_error(fd, exact):
    scale = max(1.0, np.abs(exact.grad).max(), np.abs(exact.hess).max())
    return max(np.abs(fd.grad - exact.grad).max(), np.abs(fd.hess - exact.hess).max()) / scale


def _points(rng, n, count):
    v = rng.standard_normal((count, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * rng.uniform(0.5, 2.0, (count, 1))


def test_criterion_06_closed_form_maps(report):
    rng = np.random.default_rng(SEED)
    radial_gap = equator_gap = fd_gap = 0.0
    for p, n in [(2.0, 3), (1.5, 4), (3.0, 5)]:
        target = 1 + (p - 1) ** 2 / (n - 1)
        u = radial_power_map(p, n)
        for i, x in enumerate(_points(rng, n, 100)):
            jet = radial_power_jet(p, n, x)
            radial_gap = max(radial_gap, abs(kato_ratio(jet) - target))
            if i < 20:
                fd_gap = max(fd_gap, _fd_error(finite_difference_jet(u, x), jet))
    for n, d, R in [(2, 1, 2), (3, 2, 3), (4, 3, 3)]:
        v = equator_projection_map(n, d, R)
        for i, x in enumerate(_points(rng, n, 100)):
            jet = equator_projection_jet(n, d, R, x)
            equator_gap = max(equator_gap, abs(kato_ratio(jet) - 2.0))
            if i < 20:
                fd_gap = max(fd_gap, _fd_error(finite_difference_jet(v, x), jet))
    ok = radial_gap < 1e-10 and equator_gap < 1e-10 and fd_gap < 1e-6
    report(6, ok, f"radial gap {radial_gap:.2e}, equator gap {equator_gap:.2e} (< 1e-10); FD {fd_gap:.2e} (< 1e-6)")


def test_criterion_07_regularity(report):
    target = (5 + math.sqrt(13)) / 3
    err = abs(max_p_regular(4, 4) - target)
    brute = max(n for n in range(3, 200) if (g := gate_conditions(2, n, 4)).cond1 and g.cond2)
    ok = err < 1e-9 and n0(2, 4) == 4 and brute == 4
    report(7, ok, f"|max_p_regular(4,4) - (5+sqrt13)/3| = {err:.2e} (< 1e-9); n0(2,4) = {n0(2, 4)}, brute force {brute}")


def test_criterion_08_gamma_constants(report):
    p0 = gamma.p0_cubic()
    gstar = gamma.gamma_vertex(p0)
    threshold = (3 + math.sqrt(3)) / 2
    ps = np.linspace(2.0, 2.999, 5000)
    flags = np.array([gamma.certificate(p, 0.0).admissible for p in ps])
    exact_range = bool(np.array_equal(flags, ps <= threshold))
    checks = [
        abs(p0 - gamma.p0_cardano()) < 1e-12,
        abs(p0 - 2.6427) < 5e-5,
        abs(gstar - (-0.60874)) < 5e-6,
        exact_range,
        abs(threshold - 2.366) < 5e-4,
    ]
    report(8, all(checks), f"p0 = {p0:.15f}, gamma* = {gstar:.10f}, gamma=0 admissible exactly on [2, {threshold:.6f}]: "
                           f"{exact_range}")


def test_criterion_09_certificate_coverage(report):
    p0 = gamma.p0_cubic()
    grid = np.append(np.arange(2.0, p0, 1e-3), p0)
    missing = [p for p in grid if gamma.find_certificate(p) is None]
    beyond = gamma.find_certificate(p0 + 0.01)
    report(9, not missing and beyond is None,
           f"{len(grid) - len(missing)}/{len(grid)} grid points certified; p0 + 0.01 certified: {beyond is not None}")


def test_criterion_10_appendix(report):
    rng = np.random.default_rng(SEED)
    worst_disc = -math.inf
    for _ in range(10_000):
        p = rng.uniform(2.0, 3.0)
        lo = gamma.gamma_lower_bound(p)
        g = lo + (0.0 - lo) * (1.0 - rng.uniform(0.0, 1.0))  # (lo, 0]
        worst_disc = max(worst_disc, appendix.mixed_kcs_discriminant(p, g, rng.uniform(-1.0, 1.0)))
    pointwise = appendix.verify_mixed_kcs_pointwise(2.5, -0.6, 100_000, SEED)
    estimate = appendix.rayleigh_quotient_estimate(3, 2.5, 1e-4)
    bound = appendix.rayleigh_lower_bound(3, 2.5)
    rel = (estimate - bound) / bound
    kcs_ok = worst_disc <= 0.0 and pointwise < 1e-10
    rayleigh_ok = estimate >= bound and rel <= 0.01
    report(10, kcs_ok and rayleigh_ok,
           f"mixed KCS max discriminant {worst_disc:.3e} (<= 0), pointwise {pointwise:.3e} (< 1e-10) -> "
           f"{'ok' if kcs_ok else 'FAIL'}; Rayleigh(3, 2.5, 1e-4) = {estimate:.6f} vs 1/16, relative excess "
           f"{100 * rel:.1f}% (<= 1%) -> {'ok' if rayleigh_ok else 'FAIL'}")


def test_criterion_11_figure_csvs(report, tmp_path):
    n = 3
    lo, hi = regime_bounds(n)
    kc = tmp_path / "kappa_curve.csv"
    reports.emit_figure("kappa_curve", kc, n=n, p_min=1.01, p_max=4.0, steps=30001)
    header, rows = reports.read_csv(kc)
    data = np.array(rows, dtype=float)
    p, vec, sca = data.T
    step = p[1] - p[0]
    first = p <= lo
    middle = (p > lo) & (p < hi)
    differ = vec != sca
    fig1 = (
        header == ["p", "kappa_vector", "kappa_scalar"]
        and np.array_equal(vec[first], sca[first])
        and bool(np.all(vec[middle] < sca[middle]))
        and abs(p[differ].min() - lo) <= step
        and abs(p[differ].max() - hi) <= step
    )

    cc = tmp_path / "corollary44.csv"
    reports.emit_figure("corollary44", cc, steps=100001)
    header2, rows2 = reports.read_csv(cc)
    d2 = np.array(rows2, dtype=float)
    diff = d2[:, 1] - d2[:, 2]
    idx = np.flatnonzero(np.diff(np.sign(diff)) != 0)
    crossing = d2[idx[0], 0] if len(idx) == 1 else math.nan
    fig2 = header2 == ["p", "kappa_p3", "rhs"] and abs(crossing - 2.8685) < 1e-4

    gr = tmp_path / "gamma_region.csv"
    reports.emit_figure("gamma_region", gr)
    header3, rows3 = reports.read_csv(gr)
    d3 = np.array(rows3, dtype=float)
    res3 = (d3[:, 0].max() - d3[:, 0].min()) / (len(np.unique(d3[:, 0])) - 1)
    rightmost = d3[d3[:, 4] == 1, 0].max()
    _, brows = reports.read_csv(gr.with_name("gamma_region_boundaries.csv"))
    curves = {r[0] for r in brows}
    fig3 = (
        header3 == ["p", "gamma", "A", "B", "admissible"]
        and abs(rightmost - 2.6427) <= res3
        and curves == {"A=0", "B=0", "gamma_bound"}
    )
    report(11, fig1 and fig2 and fig3,
           f"Fig.1 curves coincide/differ at [{p[differ].min():.4f}, {p[differ].max():.4f}]: {fig1}; "
           f"Fig.2 crossing {crossing:.5f}: {fig2}; Fig.3 rightmost admissible p {rightmost:.3f}: {fig3}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
