"""Pointwise positivity checks behind the parabolic Carleman estimate.

The time-dependent weight is

    phi(t, x) = (1 - t)/t * phi_s(x) + eps * (1 - t)**2,

with phi_s = r**alpha f(psi) the spatial weight. Everything here is a
pointwise quantity; the integral estimate itself is not reconstructed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .polar_weight import (
    PolarPoint,
    PolarWeight,
    eig_sym2,
    eval_profile,
    polar_frame,
    spectrum,
    weight_geometry,
)
from .pseudoconvexity import DEFAULT_GRID_N, min_argmin, symmetric_grid

DEFAULT_EPSILON = 1e-3
DEFAULT_TAU = 1.0
G_LEAD = 3.6  # = 4 - 2/5, leading coefficient of the cross-section expression
F_SHIFT = 2.0 / 5.0


@dataclass(frozen=True)
class TimeWeightParams:
    spatial: PolarWeight
    epsilon: float = DEFAULT_EPSILON
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon!r}")
        if not self.tau > 0:
            raise ParameterError(f"tau must be positive, got {self.tau!r}")


def _check_t(t):
    if not 0 < t < 1:
        raise DomainError(f"time must lie in (0, 1), got {t!r}")


@dataclass(frozen=True)
class TimeDerivatives:
    phi: float
    dt_phi: float
    dt2_phi: float
    grad_sq: float
    dt_grad_sq: float
    lam_min: float  # lambda_min of the full spatial Hessian at time t
    lam_min_dt_phi1: float
    dt_phi1: float


def time_weight_derivatives(params: TimeWeightParams, t: float, p: PolarPoint) -> TimeDerivatives:
    _check_t(t)
    geo = weight_geometry(params.spatial, p)
    lam_s = spectrum(geo.hessian).lambda_min
    grad_s = float(geo.gradient @ geo.gradient)
    phi_s = geo.value
    eps = params.epsilon
    k = (1 - t) / t
    dt_phi1 = -phi_s / t**2
    # split forms: (1-t)/t^2 and (1-t)^2/t^3 pieces
    a1 = (1 - t) / t**2
    a2 = (1 - t) ** 2 / t**3
    return TimeDerivatives(
        phi=k * phi_s + eps * (1 - t) ** 2,
        dt_phi=dt_phi1 - 2 * eps * (1 - t),
        dt2_phi=2 * phi_s / t**3 + 2 * eps,
        grad_sq=k * k * grad_s,
        dt_grad_sq=-2 * a1 * grad_s - 2 * a2 * grad_s,
        lam_min=k * lam_s,
        lam_min_dt_phi1=-a1 * phi_s * lam_s - a2 * phi_s * lam_s,
        dt_phi1=dt_phi1,
    )


def aux_F_from_lambda(lam_min_phi1: float, tau: float) -> float:
    return -4.0 * tau * lam_min_phi1 + F_SHIFT


def aux_F(params: TimeWeightParams, t: float, p: PolarPoint) -> float:
    """Auxiliary multiplier F = -4 tau lambda_min(Hess phi_1) + 2/5."""
    d = time_weight_derivatives(params, t, p)
    return aux_F_from_lambda(d.lam_min, params.tau)


def _cross_section(weight: PolarWeight, grid_n: int):
    psi = symmetric_grid(weight.half_angle, grid_n)
    f, fp, fpp = eval_profile(weight.profile, psi)
    g_r, g_s, h_rr, h_rs, h_ss = polar_frame(weight.alpha, f, fp, fpp)
    lam_min, lam_max = eig_sym2(h_rr, h_rs, h_ss)
    return psi, f, g_r * g_r + g_s * g_s, lam_min, lam_max


def g_expression(weight: PolarWeight, psi, lead: float = G_LEAD):
    """lead*|grad phi|^2 + 4 lambda_min(Hess phi) phi at r = 1."""
    f, fp, fpp = eval_profile(weight.profile, psi)
    g_r, g_s, h_rr, h_rs, h_ss = polar_frame(weight.alpha, f, fp, fpp)
    lam_min, _ = eig_sym2(h_rr, h_rs, h_ss)
    return lead * (g_r * g_r + g_s * g_s) + 4 * lam_min * f


@dataclass(frozen=True, eq=False)
class GCrossSection:
    theta_deg: float
    grid_n: int
    lead: float
    psi: np.ndarray
    values: np.ndarray
    min_value: float
    argmin_psi: float
    positive: bool
    g_local_min_at_zero: bool
    bracket_local_min_at_zero: bool

    def to_dict(self) -> dict:
        return {
            "theta_deg": self.theta_deg,
            "grid_n": self.grid_n,
            "lead": self.lead,
            "min_value": self.min_value,
            "argmin_psi_rad": self.argmin_psi,
            "positive": self.positive,
            "g_local_min_at_zero": self.g_local_min_at_zero,
            "bracket_local_min_at_zero": self.bracket_local_min_at_zero,
        }

    def csv_rows(self):
        return ["psi_rad", "g_value"], zip(self.psi.tolist(), self.values.tolist())


def _local_min_at_zero(fn, h=1e-3, slack=1e-9) -> bool:
    g0 = float(fn(0.0))
    return bool(fn(h) >= g0 - slack and fn(-h) >= g0 - slack)


def g_cross_section(weight: PolarWeight, grid_n: int = DEFAULT_GRID_N, lead: float = G_LEAD) -> GCrossSection:
    """Cross-section of lead*|grad phi|^2 + 4 lambda_min phi at r = 1.

    Also reports whether psi = 0 is a local minimum of this expression and of
    the t-independent bracket 4|grad phi|^2 + 4 lambda_min phi appearing in
    the tau^2 budget.
    """
    psi = symmetric_grid(weight.half_angle, grid_n)
    values = g_expression(weight, psi, lead)
    m, at = min_argmin(psi, values)
    return GCrossSection(
        theta_deg=weight.theta_deg,
        grid_n=grid_n,
        lead=lead,
        psi=psi,
        values=values,
        min_value=m,
        argmin_psi=at,
        positive=bool(m >= 0),
        g_local_min_at_zero=_local_min_at_zero(lambda s: g_expression(weight, s, lead)),
        bracket_local_min_at_zero=_local_min_at_zero(lambda s: g_expression(weight, s, 4.0)),
    )


@dataclass(frozen=True, eq=False)
class EigenSeparation:
    theta_deg: float
    grid_n: int
    psi: np.ndarray
    lam_min: np.ndarray
    lam_max: np.ndarray
    separated: bool
    min_gap: float
    max_lam_min: float
    min_lam_max: float

    def to_dict(self) -> dict:
        return {
            "theta_deg": self.theta_deg,
            "grid_n": self.grid_n,
            "separated": self.separated,
            "min_gap": self.min_gap,
            "max_lambda_min": self.max_lam_min,
            "min_lambda_max": self.min_lam_max,
        }

    def csv_rows(self):
        return ["psi_rad", "lambda_min", "lambda_max"], zip(
            self.psi.tolist(), self.lam_min.tolist(), self.lam_max.tolist()
        )


def eigen_separation(weight: PolarWeight, grid_n: int = DEFAULT_GRID_N) -> EigenSeparation:
    """Hessian eigenvalues along the cross-section at r = 1.

    The time factor (1-t)/t of phi_1 is a positive scaling, so signs and the
    crossing question do not depend on t.
    """
    psi, _, _, lam_min, lam_max = _cross_section(weight, grid_n)
    return EigenSeparation(
        theta_deg=weight.theta_deg,
        grid_n=grid_n,
        psi=psi,
        lam_min=lam_min,
        lam_max=lam_max,
        separated=bool(np.all(lam_max > 0) and np.all(lam_min < 0)),
        min_gap=float(np.min(lam_max - lam_min)),
        max_lam_min=float(np.max(lam_min)),
        min_lam_max=float(np.min(lam_max)),
    )


def hessian_entries(weight: PolarWeight, psi: np.ndarray):
    """Cartesian Hessian entries (xx, xy, yy) at r = 1 along ``psi``."""
    f, fp, fpp = eval_profile(weight.profile, psi)
    _, _, h_rr, h_rs, h_ss = polar_frame(weight.alpha, f, fp, fpp)
    c, s = np.cos(psi), np.sin(psi)
    hxx = c * c * h_rr - 2 * c * s * h_rs + s * s * h_ss
    hxy = c * s * (h_rr - h_ss) + (c * c - s * s) * h_rs
    hyy = s * s * h_rr + 2 * c * s * h_rs + c * c * h_ss
    return hxx, hxy, hyy


@dataclass(frozen=True)
class BudgetValue:
    """Pointwise tau^2 budget, with the common tau^2 factor removed.

    ``integrand`` is the phi_1 part, homogeneous of degree 2*alpha - 2 in r;
    ``epsilon_term`` is the phi_2 contribution -4 dt(phi_2) lambda_min, of
    degree alpha - 2. Normalized values multiply by t^2 / ((1-t) r^(2 alpha - 2)).
    """

    integrand: float
    epsilon_term: float
    normalized: float
    normalized_total: float
    tau_order: float | None = None

    @property
    def total(self) -> float:
        return self.integrand + self.epsilon_term


def _laplacian_polar(beta, g, g2):
    # Laplacian of r**beta * g(psi) at r = 1
    return beta * beta * g + g2


def tau_order_terms(params: TimeWeightParams, t: float, p: PolarPoint, h: float = 1e-4) -> float:
    """Order-tau remainder left after the tau^2 budget.

    tau*(dt2 phi - bilap phi + (2/5) dt phi + (4/5) lambda_min) - (1/2) lap F,
    with angular second derivatives taken by central differences (step h).
    """
    _check_t(t)
    w = params.spatial
    a = w.alpha
    half = w.half_angle
    r, psi = p.r, p.psi
    # stencil shifted inward near the cone boundary
    c = min(max(psi, -half + h), half - h)
    pts = np.array([c - h, c, c + h, psi])
    f, fp, fpp = eval_profile(w.profile, pts)
    lap_ang = a * a * f + fpp  # lap phi_s = r^(a-2) * lap_ang(psi)
    d2 = (lap_ang[0] - 2 * lap_ang[1] + lap_ang[2]) / h**2
    k = (1 - t) / t
    bilap = k * r ** (a - 4) * _laplacian_polar(a - 2, lap_ang[3], d2)
    lam_ang = eig_sym2(*polar_frame(a, f, fp, fpp)[2:])[0]
    lam2 = (lam_ang[0] - 2 * lam_ang[1] + lam_ang[2]) / h**2
    lap_lam = k * r ** (a - 4) * _laplacian_polar(a - 2, lam_ang[3], lam2)
    lap_F = -4 * params.tau * lap_lam
    d = time_weight_derivatives(params, t, p)
    tau = params.tau
    return float(tau * (d.dt2_phi - bilap + F_SHIFT * d.dt_phi + 2 * F_SHIFT * d.lam_min) - 0.5 * lap_F)


def tau2_budget(params: TimeWeightParams, t: float, p: PolarPoint, include_tau_order: bool = False) -> BudgetValue:
    """-2 dt|grad phi|^2 - 4 dt(phi) lambda_min(Hess phi) - (2/5)|grad phi|^2, pointwise."""
    d = time_weight_derivatives(params, t, p)
    integrand = -2 * d.dt_grad_sq - 4 * d.lam_min_dt_phi1 - F_SHIFT * d.grad_sq
    dt_phi2 = d.dt_phi - d.dt_phi1
    eps_term = -4 * dt_phi2 * d.lam_min
    norm = t**2 / ((1 - t) * p.r ** (2 * params.spatial.alpha - 2))
    return BudgetValue(
        integrand=integrand,
        epsilon_term=eps_term,
        normalized=integrand * norm,
        normalized_total=(integrand + eps_term) * norm,
        tau_order=tau_order_terms(params, t, p) if include_tau_order else None,
    )


@dataclass(frozen=True)
class BudgetScan:
    epsilon: float
    infimum: float
    argmin_t: float
    argmin_psi: float
    positive: bool


def budget_scan(
    weight: PolarWeight,
    epsilon: float = DEFAULT_EPSILON,
    times=tuple(np.round(np.arange(1, 10) * 0.1, 10)),
    n_psi: int = 101,
    r: float = 1.0,
) -> BudgetScan:
    """Infimum of the normalized total budget over a (t, psi) product grid."""
    params = TimeWeightParams(weight, epsilon)
    psi = np.linspace(-weight.half_angle, weight.half_angle, n_psi)
    best = (math.inf, math.nan, math.nan)
    for t in times:
        for s in psi:
            v = tau2_budget(params, float(t), PolarPoint(r, float(s))).normalized_total
            if v < best[0]:
                best = (v, float(t), float(s))
    return BudgetScan(epsilon, best[0], best[1], best[2], bool(best[0] > 0))


def largest_admissible_epsilon(weight: PolarWeight, candidates=(0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 1e-3)) -> float | None:
    """Largest candidate epsilon (<= 0.1) keeping the budget scan positive."""
    for eps in sorted(candidates, reverse=True):
        if budget_scan(weight, eps).positive:
            return eps
    return None
