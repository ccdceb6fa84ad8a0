import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cohesive_transport import (StiffnessChain, baseline_gamma_bound,
                                baseline_spectral_radius,
                                build_pinned_laplacian, dsr_mode_roots,
                                jury_stable, closed_form_stable, spectral_radius)

DT = 0.03

gains_alpha = st.floats(1e-3, 2.0, allow_nan=False)
gains_beta = st.floats(1e-3, 22.0, allow_nan=False)
mode_lambda = st.floats(1e-3, 0.5, allow_nan=False)


def quadratic_residual(lam, alpha, beta, z):
    coeff_b = -(2.0 - beta * lam - alpha * beta * DT * lam)
    coeff_c = 1.0 - beta * lam
    return abs(z * z + coeff_b * z + coeff_c)


def test_gamma_bound_reference_chain(lap4):
    assert baseline_gamma_bound(lap4) == 2.0 / lap4.lambda_max
    assert baseline_gamma_bound(lap4) == pytest.approx(11.36, abs=0.05)


def test_gamma_bound_single_modes():
    lap_one = build_pinned_laplacian(StiffnessChain((), (1.0,)))
    assert baseline_gamma_bound(lap_one) == pytest.approx(2.0)
    lap_two = build_pinned_laplacian(StiffnessChain((), (2.0,)))
    assert baseline_gamma_bound(lap_two) == pytest.approx(1.0)


def test_baseline_modes_inside_unit_circle(lap4):
    gbar = baseline_gamma_bound(lap4)
    for gamma in np.linspace(0.05 * gbar, 0.95 * gbar, 12):
        assert baseline_spectral_radius(lap4, gamma) < 1.0
    assert baseline_spectral_radius(lap4, 1.02 * gbar) > 1.0


def test_roots_zero_alpha_boundary():
    lam, beta = 0.2, 2.0  # beta*lam = 0.4
    z1, z2 = dsr_mode_roots(lam, 0.0, beta, DT)
    mags = sorted([abs(z1), abs(z2)])
    assert mags[1] == pytest.approx(1.0, abs=1e-12)
    assert mags[0] == pytest.approx(1.0 - beta * lam, abs=1e-12)


def test_roots_deadbeat():
    lam, beta = 0.1, 10.0               # beta*lam = 1
    alpha = 1.0 / (beta * DT * lam)     # alpha*beta*dt*lam = 1
    z1, z2 = dsr_mode_roots(lam, alpha, beta, DT)
    assert z1 == 0 and z2 == 0


def test_roots_reference_mode_satisfy_quadratic():
    for lam in (0.176, 0.00603, 0.05, 0.1174):
        z1, z2 = dsr_mode_roots(lam, 0.39, 10.92, DT)
        assert quadratic_residual(lam, 0.39, 10.92, z1) < 1e-10
        assert quadratic_residual(lam, 0.39, 10.92, z2) < 1e-10
        assert abs(z1) >= abs(z2)


def test_roots_rejects_bad_lambda():
    with pytest.raises(ValueError):
        dsr_mode_roots(0.0, 0.4, 10.0, DT)


@settings(max_examples=150, deadline=None)
@given(mode_lambda, gains_alpha, gains_beta)
def test_root_sum_and_product_identities(lam, alpha, beta):
    z1, z2 = dsr_mode_roots(lam, alpha, beta, DT)
    product = z1 * z2
    total = z1 + z2
    assert abs(product.real - (1.0 - beta * lam)) < 1e-12 * max(1.0, abs(1 - beta * lam))
    assert abs(product.imag) < 1e-12
    expected_sum = 2.0 - beta * lam - alpha * beta * DT * lam
    assert abs(total.real - expected_sum) < 1e-12 * max(1.0, abs(expected_sum))
    assert abs(total.imag) < 1e-14


@settings(max_examples=150, deadline=None)
@given(mode_lambda, st.floats(0.05, 0.95), st.floats(1.1, 4.0))
def test_complex_pair_magnitude_is_sqrt_product(lam, blam, excess):
    # underdamping requires alpha*beta*dt*lam above (1 - sqrt(1-beta*lam))^2
    beta = blam / lam
    threshold = (1.0 - math.sqrt(1.0 - blam)) ** 2
    alpha = threshold * excess / (beta * DT * lam)
    z1, z2 = dsr_mode_roots(lam, alpha, beta, DT)
    assume(z1.imag != 0)  # excess = 1.1 can still be numerically borderline
    expected = math.sqrt(1.0 - blam)
    assert abs(z1) == pytest.approx(expected, rel=1e-12)
    assert abs(z2) == pytest.approx(expected, rel=1e-12)


def test_jury_reference_gains_stable():
    assert jury_stable(0.176, 0.39, 10.92, DT)


def test_jury_boundary_is_unstable():
    lam, alpha = 0.176, 0.5
    beta = 4.0 / (lam * (alpha * DT + 2.0))
    assert not jury_stable(lam, alpha, beta, DT)


def test_jury_large_beta_unstable():
    lam = 0.25
    beta = 2.5 / lam  # |1 - beta*lam| = 1.5
    assert not jury_stable(lam, 1.0, beta, DT)


@settings(max_examples=200, deadline=None)
@given(mode_lambda, st.floats(-0.5, 2.0), st.floats(1e-4, 30.0))
def test_jury_matches_root_magnitudes(lam, alpha, beta):
    # skip points within tolerance of any boundary quantity: both tests
    # deliberately count marginal systems as unstable
    coeff_b = -(2.0 - beta * lam - alpha * beta * DT * lam)
    coeff_c = 1.0 - beta * lam
    assume(abs(1.0 + coeff_b + coeff_c) > 1e-8)
    assume(abs(1.0 - coeff_b + coeff_c) > 1e-8)
    assume(abs(abs(coeff_c) - 1.0) > 1e-8)
    z1, _ = dsr_mode_roots(lam, alpha, beta, DT)
    assume(abs(abs(z1) - 1.0) > 1e-8)
    assert jury_stable(lam, alpha, beta, DT) == (abs(z1) < 1.0)


def test_closed_form_reference_gains(lap4):
    bound = 4.0 / (lap4.lambda_max * (0.39 * DT + 2.0))
    assert bound == pytest.approx(11.3, abs=0.05)
    assert closed_form_stable(lap4, 0.39, 10.92, DT)
    assert not closed_form_stable(lap4, 0.0, 10.92, DT)
    assert not closed_form_stable(lap4, -1.0, 10.92, DT)
    assert not closed_form_stable(lap4, 0.39, 0.0, DT)
    assert not closed_form_stable(lap4, 0.39, bound, DT)  # open interval
    assert closed_form_stable(lap4, 0.39, 0.999 * bound, DT)


def test_spectral_radius_reference_gains(lap4):
    report = spectral_radius(lap4, 0.39, 10.92, DT)
    assert report.stable
    assert not report.marginal
    assert report.spectral_radius < 1.0
    assert report.spectral_radius == pytest.approx(0.98837, abs=2e-5)
    assert len(report.per_mode) == 4
    mags = [m.magnitude1 for m in report.per_mode]
    assert report.spectral_radius == max(mags)
    assert report.binding_mode == int(np.argmax(mags))
    for mode in report.per_mode:
        assert mode.magnitude1 == abs(mode.z1)
        assert mode.magnitude2 == abs(mode.z2)
        assert mode.magnitude1 >= mode.magnitude2


def test_spectral_radius_deadbeat_single_mode():
    lap = build_pinned_laplacian(StiffnessChain((), (0.1,)))
    alpha = 1.0 / (10.0 * DT * 0.1)
    report = spectral_radius(lap, alpha, 10.0, DT)
    assert report.spectral_radius == 0.0
    assert report.stable


def test_spectral_radius_unstable_gains(lap4):
    report = spectral_radius(lap4, 0.39, 20.0, DT)
    assert not report.stable
    assert report.spectral_radius >= 1.0
    assert not closed_form_stable(lap4, 0.39, 20.0, DT)


def test_report_serializes(lap4):
    payload = spectral_radius(lap4, 0.39, 10.92, DT).as_dict()
    assert payload["stable"] is True
    assert len(payload["per_mode"]) == 4
    assert payload["per_mode"][0]["z1"][0] == pytest.approx(
        spectral_radius(lap4, 0.39, 10.92, DT).per_mode[0].z1.real)


def test_three_way_equivalence_moderate_grid(lap4):
    """Closed form, Jury conditions, and exact root magnitudes agree
    away from stability boundaries (finer grid in the acceptance suite)."""
    alphas = np.linspace(0.04, 2.0, 50)
    betas = np.linspace(0.09, 2.0 * baseline_gamma_bound(lap4), 50)
    checked = 0
    for alpha in alphas:
        for beta in betas:
            verdicts = _three_way(lap4, alpha, beta)
            if verdicts is None:
                continue
            checked += 1
            closed_form, jury, roots = verdicts
            assert closed_form == jury == roots, (alpha, beta)
    assert checked > 2000


def _three_way(lap, alpha, beta, boundary_tol=1e-9):
    """(closed_form, jury, roots) verdicts, or None when any quantity sits
    within boundary_tol of an equality condition."""
    bound = 4.0 / (lap.lambda_max * (alpha * DT + 2.0))
    if abs(beta - bound) < boundary_tol * max(1.0, bound):
        return None
    jury = True
    roots = True
    for lam in lap.eigenvalues:
        coeff_b = -(2.0 - beta * lam - alpha * beta * DT * lam)
        coeff_c = 1.0 - beta * lam
        d_plus, d_minus = 1.0 + coeff_b + coeff_c, 1.0 - coeff_b + coeff_c
        if (abs(d_plus) < boundary_tol or abs(d_minus) < boundary_tol
                or abs(abs(coeff_c) - 1.0) < boundary_tol):
            return None
        jury = jury and jury_stable(float(lam), alpha, beta, DT)
        z1, _ = dsr_mode_roots(float(lam), alpha, beta, DT)
        if abs(abs(z1) - 1.0) < boundary_tol:
            return None
        roots = roots and (abs(z1) < 1.0)
    return closed_form_stable(lap, alpha, beta, DT), jury, roots


def test_random_unstable_gains_diverge(lap4, chain4, rng):
    """Any gain pair with spectral radius above 1.05 visibly blows up
    a unit-step response within a few thousand steps."""
    k = lap4.matrix
    b = lap4.leader_vector
    found = 0
    while found < 20:
        alpha = float(rng.uniform(0.05, 2.0))
        beta = float(rng.uniform(0.1, 40.0))
        report = spectral_radius(lap4, alpha, beta, DT)
        if report.spectral_radius <= 1.05:
            continue
        found += 1
        y = np.zeros(4)
        y_old = np.zeros(4)
        peak = 0.0
        for _ in range(5000):
            nxt = (y - alpha * beta * DT * (k @ y) + alpha * beta * DT * b * 1.0
                   + (y - y_old) - beta * (k @ (y - y_old)))
            y_old, y = y, nxt
            peak = max(peak, float(np.max(np.abs(y))))
            if peak > 1e3:
                break
        assert peak > 1e3, (alpha, beta, report.spectral_radius)
