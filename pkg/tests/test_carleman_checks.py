import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from carleman.carleman_checks import (
    TimeWeightParams,
    aux_F,
    aux_F_from_lambda,
    budget_scan,
    eigen_separation,
    g_cross_section,
    g_expression,
    hessian_entries,
    largest_admissible_epsilon,
    tau2_budget,
    tau_order_terms,
    time_weight_derivatives,
)
from carleman.errors import DomainError, ParameterError
from carleman.polar_weight import (
    PolarPoint,
    PolarWeight,
    PolynomialProfile,
    cospow_weight,
    eval_profile,
    spectrum,
    weight_geometry,
)

from conftest import COSPOW

W = cospow_weight(COSPOW["alpha"], COSPOW["beta"], COSPOW["theta_deg"])
A, B = COSPOW["alpha"], COSPOW["beta"]
F0 = float(eval_profile(W.profile, 0.0)[0])


def params(eps=1e-3, tau=1.0):
    return TimeWeightParams(W, eps, tau)


def test_t_half_closed_forms():
    p = PolarPoint(1.3, 0.2)
    d = time_weight_derivatives(params(), 0.5, p)
    g = weight_geometry(W, p).gradient
    assert d.dt_grad_sq == pytest.approx(-8 * (g @ g), rel=1e-13)
    assert d.dt_phi - d.dt_phi1 == pytest.approx(-1e-3, rel=1e-13)


@pytest.mark.parametrize("t", [0.1, 0.37, 0.5, 0.83])
@pytest.mark.parametrize("psi", [0.0, 0.4, -0.7])
def test_time_derivatives_match_fd(t, psi):
    prm = params(eps=0.05)
    p = PolarPoint(1.7, psi)
    h = 1e-6
    d, dm, dp = (time_weight_derivatives(prm, s, p) for s in (t, t - h, t + h))

    def fd(attr):
        return (getattr(dp, attr) - getattr(dm, attr)) / (2 * h)

    assert fd("phi") == pytest.approx(d.dt_phi, rel=1e-6)
    assert fd("dt_phi") == pytest.approx(d.dt2_phi, rel=1e-6)
    assert fd("grad_sq") == pytest.approx(d.dt_grad_sq, rel=1e-6)
    eps_part = lambda s: prm.epsilon * (1 - s) ** 2  # noqa: E731
    phi1 = lambda dd, s: dd.phi - eps_part(s)  # noqa: E731
    assert (phi1(dp, t + h) - phi1(dm, t - h)) / (2 * h) == pytest.approx(d.dt_phi1, rel=1e-6)
    assert d.lam_min_dt_phi1 == pytest.approx(d.lam_min * d.dt_phi1, rel=1e-12)


def test_time_domain():
    for t in (0.0, 1.0, -0.1):
        with pytest.raises(DomainError):
            time_weight_derivatives(params(), t, PolarPoint(1.0, 0.0))
        with pytest.raises(DomainError):
            tau2_budget(params(), t, PolarPoint(1.0, 0.0))
    with pytest.raises(ParameterError):
        TimeWeightParams(W, 0.0)


def test_aux_F_definitional():
    assert aux_F_from_lambda(0.0, 1.0) == pytest.approx(0.4)
    assert aux_F_from_lambda(-1.0, 1.0) == pytest.approx(4.4)


def test_aux_F_axis_value():
    lam = A * F0 - B
    assert lam == pytest.approx(-1.2255, abs=1e-4)
    F = aux_F(params(), 0.5, PolarPoint(1.0, 0.0))
    assert F == pytest.approx(-4 * lam + 0.4, rel=1e-12)
    assert F == pytest.approx(5.302, abs=1e-3)


def test_aux_F_positive_where_lambda_negative():
    for psi in np.linspace(-0.8, 0.8, 21):
        for t in (0.2, 0.5, 0.9):
            d = time_weight_derivatives(params(), t, PolarPoint(1.0, float(psi)))
            if d.lam_min < 0:
                assert aux_F(params(), t, PolarPoint(1.0, float(psi))) > 0


def test_g_cross_section_positive():
    rep = g_cross_section(W, 4001)
    g0 = 3.6 * (A * F0) ** 2 + 4 * (A * F0 - B) * F0
    assert g0 == pytest.approx(2.56, abs=0.01)
    assert float(g_expression(W, 0.0)) == pytest.approx(g0, rel=1e-12)
    assert rep.positive and rep.min_value >= 0
    # observed: both the displayed expression and the budget bracket bottom out on the axis
    assert rep.g_local_min_at_zero
    assert rep.bracket_local_min_at_zero
    assert rep.csv_rows()[0] == ["psi_rad", "g_value"]


def test_eigen_separation_signs():
    rep = eigen_separation(W, 4001)
    assert rep.separated
    i0 = len(rep.psi) // 2
    assert rep.lam_min[i0] == pytest.approx(-1.2255, abs=1e-4)
    assert rep.lam_max[i0] == pytest.approx(1.2494, abs=1e-4)
    assert np.all(rep.lam_max - rep.lam_min >= 0)
    assert rep.min_gap > 0


def test_eigen_isotropic_case_not_separated():
    w = PolarWeight(2.0, PolynomialProfile((1.0,), math.pi / 2, pin_boundary=False))
    rep = eigen_separation(w, 101)
    np.testing.assert_allclose(rep.lam_min, 2.0, atol=1e-14)
    np.testing.assert_allclose(rep.lam_max, 2.0, atol=1e-14)
    assert not rep.separated


def test_lambda_min_continuity():
    rep = eigen_separation(W, 4001)
    hxx, hxy, hyy = hessian_entries(W, rep.psi)
    jump_h = np.maximum.reduce([np.abs(np.diff(hxx)), np.abs(np.diff(hxy)), np.abs(np.diff(hyy))])
    assert np.all(np.abs(np.diff(rep.lam_min)) <= 10 * jump_h + 1e-15)


def test_hessian_entries_match_geometry():
    for psi in (0.0, 0.5, -0.8):
        hxx, hxy, hyy = hessian_entries(W, np.array([psi]))
        H = weight_geometry(W, PolarPoint(1.0, psi)).hessian
        np.testing.assert_allclose([hxx[0], hxy[0], hyy[0]], [H[0, 0], H[0, 1], H[1, 1]], rtol=1e-12, atol=1e-14)
        s = spectrum(H)
        assert s.lambda_min < 0 < s.lambda_max


def test_budget_axis_positive():
    b = tau2_budget(params(), 0.5, PolarPoint(1.0, 0.0))
    d = time_weight_derivatives(params(), 0.5, PolarPoint(1.0, 0.0))
    direct = -2 * d.dt_grad_sq - 4 * d.lam_min_dt_phi1 - 0.4 * d.grad_sq
    assert b.integrand == pytest.approx(direct, rel=1e-14)
    assert b.integrand > 0 and b.total > 0


@given(st.floats(0.05, 0.95), st.floats(-0.8, 0.8), st.floats(0.1, 10.0))
def test_budget_normalized_r_invariance(t, psi, r):
    b1 = tau2_budget(params(), t, PolarPoint(r, psi))
    b2 = tau2_budget(params(), t, PolarPoint(2 * r, psi))
    assert b2.normalized == pytest.approx(b1.normalized, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("psi", [0.0, 0.3, -0.6])
def test_budget_t_factorization(psi):
    p = PolarPoint(1.0, psi)
    geo = weight_geometry(W, p)
    grad_sq = float(geo.gradient @ geo.gradient)
    lam_phi = spectrum(geo.hessian).lambda_min * geo.value
    for t in (0.25, 0.75):
        expect = 4 / t * (grad_sq + lam_phi) - 0.4 * (1 - t) * grad_sq
        assert tau2_budget(params(), t, p).normalized == pytest.approx(expect, rel=1e-12)


def test_epsilon_term_sign():
    # lambda_min < 0 on the axis and dt phi_2 < 0, so the phi_2 term is negative
    b = tau2_budget(params(0.01), 0.5, PolarPoint(1.0, 0.0))
    assert b.epsilon_term < 0
    d = time_weight_derivatives(params(0.01), 0.5, PolarPoint(1.0, 0.0))
    assert b.epsilon_term == pytest.approx(8 * 0.01 * 0.5 * d.lam_min, rel=1e-12)


def test_budget_scan_positive():
    scan = budget_scan(W, 1e-3)
    assert scan.positive and scan.infimum > 0
    assert largest_admissible_epsilon(W) == 0.1


def test_tau_order_terms_finite():
    for psi in (0.0, 0.5, W.half_angle):
        v = tau_order_terms(params(), 0.5, PolarPoint(1.0, psi))
        assert math.isfinite(v)
    b = tau2_budget(params(), 0.5, PolarPoint(1.0, 0.2), include_tau_order=True)
    assert b.tau_order is not None
