"""Limiting Carleman weight Re(z**alpha) + eps * x**alpha for the Laplacian.

In two dimensions the Poisson bracket on the joint characteristic set reduces
to 4 tau^3 |grad phi|^2 lap(phi), so pseudoconvexity is subharmonicity. The
harmonic part contributes nothing to the Laplacian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGradientError, DomainError, ParameterError
from .polar_weight import CartesianPoint
from .units import deg2rad


@dataclass(frozen=True)
class EllipticWeight:
    alpha: float
    epsilon: float = 0.1

    def __post_init__(self):
        if not 1 < self.alpha < 2:
            raise ParameterError(f"alpha must lie in (1, 2), got {self.alpha!r}")
        if self.epsilon < 0:
            raise ParameterError(f"epsilon must be nonnegative, got {self.epsilon!r}")

    @classmethod
    def from_theta_deg(cls, theta_deg: float, epsilon: float = 0.1) -> "EllipticWeight":
        if not 90 < theta_deg < 180:
            raise DomainError(f"opening angle must lie in (90, 180) degrees, got {theta_deg!r}")
        return cls(math.pi / deg2rad(theta_deg), epsilon)

    @property
    def half_angle(self) -> float:
        """Half-opening of the cone on which Re(z**alpha) is positive."""
        return math.pi / (2 * self.alpha)


@dataclass(frozen=True)
class EllipticGeometry:
    value: float
    gradient: np.ndarray
    hessian: np.ndarray
    laplacian: float  # trace of the Hessian
    laplacian_closed: float  # eps * alpha * (alpha - 1) * x**(alpha - 2)


def _check_point(w: EllipticWeight, p: CartesianPoint) -> complex:
    if not p.x > 0:
        raise DomainError(f"elliptic weight needs x > 0, got x = {p.x!r}")
    if abs(math.atan2(p.y, p.x)) > w.half_angle:
        raise DomainError("point lies outside the cone")
    return complex(p.x, p.y)


def elliptic_geometry(w: EllipticWeight, p: CartesianPoint) -> EllipticGeometry:
    z = _check_point(w, p)
    a, eps, x = w.alpha, w.epsilon, p.x
    # principal branch; x > 0 keeps us away from the cut
    d1 = a * z ** (a - 1)
    d2 = a * (a - 1) * z ** (a - 2)
    value = (z**a).real + eps * x**a
    grad = np.array([d1.real + eps * a * x ** (a - 1), -d1.imag])
    hxx = d2.real + eps * a * (a - 1) * x ** (a - 2)
    hxy = -d2.imag
    hyy = -d2.real
    hess = np.array([[hxx, hxy], [hxy, hyy]])
    return EllipticGeometry(
        value=value,
        gradient=grad,
        hessian=hess,
        laplacian=float(hxx + hyy),
        laplacian_closed=eps * a * (a - 1) * x ** (a - 2),
    )


@dataclass(frozen=True)
class BracketCheck:
    lhs: float
    rhs: float
    lhs_flipped: float  # same bracket with the opposite unit normal

    @property
    def rel_err(self) -> float:
        return abs(self.lhs - self.rhs) / (1 + abs(self.rhs))


def bracket_charset_check(w: EllipticWeight, p: CartesianPoint, tau: float) -> BracketCheck:
    """Poisson bracket at xi = tau |grad phi| n, n a unit normal to grad phi."""
    geo = elliptic_geometry(w, p)
    g, H = geo.gradient, geo.hessian
    norm = math.hypot(*g)
    if norm < 1e-12:
        raise DegenerateGradientError(f"|grad phi| = {norm!r} at {p}")
    n = np.array([-g[1], g[0]]) / norm

    def lhs(normal):
        xi = tau * norm * normal
        return 4 * (tau**3 * (g @ H @ g) + tau * (xi @ H @ xi))

    return BracketCheck(
        lhs=float(lhs(n)),
        rhs=4 * tau**3 * geo.laplacian * norm**2,
        lhs_flipped=float(lhs(-n)),
    )


def bracket_trace_form(w: EllipticWeight, p: CartesianPoint, tau: float) -> float:
    """The bracket from the trace split grad.H.grad/|grad|^2 + n.H.n = lap phi."""
    geo = elliptic_geometry(w, p)
    g, H = geo.gradient, geo.hessian
    gg = g @ g
    n = np.array([-g[1], g[0]]) / math.sqrt(gg)
    return float(4 * tau**3 * gg * ((g @ H @ g) / gg + n @ H @ n))


@dataclass(frozen=True)
class DecayExponents:
    theta_deg: float
    alpha: float
    prop_bound: float  # (2 - alpha) / alpha
    remark_value: float  # (alpha - 2) / 2
    norm_exponents: tuple  # ((3 alpha - 4)/2, (alpha - 2)/2)
    discrepancy: bool

    def to_dict(self) -> dict:
        return {
            "theta_deg": self.theta_deg,
            "alpha": self.alpha,
            "prop_bound": self.prop_bound,
            "remark_value": self.remark_value,
            "norm_exponents": list(self.norm_exponents),
            "discrepancy_flag": self.discrepancy,
        }


def decay_exponents(theta_deg: float) -> DecayExponents:
    """Exponent bookkeeping for the drift bound |c_2| <= C |x|^(-b).

    The two values for b are reported side by side; they disagree for every
    alpha in (1, 2) and are not reconciled here.
    """
    if not 90 < theta_deg < 180:
        raise DomainError(f"opening angle must lie in (90, 180) degrees, got {theta_deg!r}")
    a = math.pi / deg2rad(theta_deg)
    prop = (2 - a) / a
    remark = (a - 2) / 2
    return DecayExponents(
        theta_deg=float(theta_deg),
        alpha=a,
        prop_bound=prop,
        remark_value=remark,
        norm_exponents=((3 * a - 4) / 2, (a - 2) / 2),
        discrepancy=not math.isclose(prop, remark),
    )


def random_cone_points(w: EllipticWeight, n: int, rng: np.random.Generator, r_range=(0.5, 3.0), margin=0.98):
    r = rng.uniform(*r_range, n)
    psi = rng.uniform(-margin * w.half_angle, margin * w.half_angle, n)
    return [CartesianPoint(float(a * math.cos(b)), float(a * math.sin(b))) for a, b in zip(r, psi)]


def elliptic_report(w: EllipticWeight, n_samples: int = 1000, seed: int = 0) -> dict:
    """Laplacian sign and bracket identity over random cone points and tau in [1, 1e3]."""
    rng = np.random.default_rng(seed)
    pts = random_cone_points(w, n_samples, rng)
    taus = 10 ** rng.uniform(0, 3, n_samples)
    lap_pos = True
    trace_err = 0.0
    brk_err = 0.0
    for p, tau in zip(pts, taus):
        geo = elliptic_geometry(w, p)
        lap_pos &= geo.laplacian > 0
        trace_err = max(trace_err, abs(geo.laplacian - geo.laplacian_closed) / max(abs(geo.laplacian_closed), 1e-300))
        chk = bracket_charset_check(w, p, float(tau))
        brk_err = max(brk_err, abs(chk.lhs - chk.rhs) / max(abs(chk.rhs), 1e-300))
    theta = 180.0 / w.alpha
    exps = decay_exponents(theta) if 90 < theta < 180 else None
    return {
        "alpha": w.alpha,
        "epsilon": w.epsilon,
        "n_samples": n_samples,
        "laplacian_positive": bool(lap_pos),
        "laplacian_trace_max_rel_err": trace_err,
        "bracket_max_rel_err": brk_err,
        "exponents": exps.to_dict() if exps else None,
    }
