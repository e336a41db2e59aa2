"""Radially homogeneous weights r**alpha * f(psi) and their Cartesian geometry.

Angular profiles come in three flavours: a shifted cosine power, an even
polynomial, and a tabulated profile (used to feed shooting output back into
the checkers). All derivatives are closed form except for the tabulated
profile, whose derivatives come from a piecewise Hermite interpolant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import BPoly, CubicHermiteSpline

from .errors import DomainError, ParameterError, SingularityError
from .units import full_angle_deg, half_angle

# slack on the closed angular domain, absorbs degree->radian round trips
_ANGLE_SLACK = 1e-12

DEFAULT_ALPHA = 1.999999

# even coefficients (psi**0, psi**2, ..., psi**10) of the degree-10 profile
POLY10_EVEN_COEFFS = (0.987609, -1.22053, 0.562108, -0.162117, 0.0481833, -0.000001)
POLY10_ALPHA = 1.99999


def _check_domain(psi, half: float):
    psi = np.asarray(psi, dtype=float)
    if np.any(np.abs(psi) > half + _ANGLE_SLACK):
        raise DomainError(
            f"angle outside [-{half!r}, {half!r}] rad: max |psi| = {np.max(np.abs(psi))!r}"
        )
    return psi


@dataclass(frozen=True)
class CosPowerProfile:
    """f(psi) = cos(psi)**beta - cos(half_angle)**beta."""

    beta: float
    half_angle: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ParameterError(f"beta must be positive, got {self.beta!r}")
        if not 0 < self.half_angle < math.pi / 2:
            raise ParameterError(f"half angle must lie in (0, pi/2), got {self.half_angle!r}")

    def evaluate(self, psi):
        b = self.beta
        c = np.cos(psi)
        s = np.sin(psi)
        logc = np.log(c)
        cb = np.exp(b * logc)
        f = cb - math.exp(b * math.log(math.cos(self.half_angle)))
        fp = -b * np.exp((b - 1) * logc) * s
        fpp = b * (b - 1) * np.exp((b - 2) * logc) * s * s - b * cb
        return f, fp, fpp


@dataclass(frozen=True)
class PolynomialProfile:
    """Even polynomial in psi, coefficients in ascending powers.

    With ``pin_boundary`` the constant coefficient is replaced so the profile
    vanishes at +-half_angle.
    """

    coeffs: tuple
    half_angle: float
    pin_boundary: bool = True

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ParameterError("empty coefficient list")
        if any(c != 0.0 for c in coeffs[1::2]):
            raise ParameterError("odd-degree coefficients must vanish for an even profile")
        if not 0 < self.half_angle <= math.pi:
            raise ParameterError(f"half angle must lie in (0, pi], got {self.half_angle!r}")
        if self.pin_boundary:
            rest = np.array((0.0,) + coeffs[1:])
            coeffs = (-float(P.polyval(self.half_angle, rest)),) + coeffs[1:]
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_even(cls, even_coeffs: Sequence[float], half_angle: float, pin_boundary: bool = True):
        full = []
        for c in even_coeffs:
            full.extend([float(c), 0.0])
        return cls(tuple(full[:-1]), half_angle, pin_boundary)

    @property
    def even_coeffs(self):
        return self.coeffs[::2]

    def evaluate(self, psi):
        c = np.array(self.coeffs)
        d1 = P.polyder(c)
        d2 = P.polyder(c, 2)
        return P.polyval(psi, c), P.polyval(psi, d1), P.polyval(psi, d2)


@dataclass(frozen=True, eq=False)
class TabulatedProfile:
    """Profile known at samples (psi, f, f', f'').

    ``cubic_hermite`` interpolates (f, f') and differentiates the interpolant
    for f''. ``quintic_hermite`` also matches the f'' samples; use it for
    profiles whose f'' is known exactly at the nodes (shooting output), since
    the cubic rule's f'' is only first-order accurate.
    """

    psi: np.ndarray
    f: np.ndarray
    fp: np.ndarray
    fpp: np.ndarray
    rule: str = "cubic_hermite"
    _spline: object = field(init=False, repr=False)

    def __post_init__(self):
        arrs = [np.array(a, dtype=float) for a in (self.psi, self.f, self.fp, self.fpp)]
        psi = arrs[0]
        if psi.ndim != 1 or len(psi) < 3 or any(len(a) != len(psi) for a in arrs):
            raise ParameterError("tabulated profile needs >= 3 samples of equal length")
        if np.any(np.diff(psi) <= 0):
            raise ParameterError("sample angles must be strictly increasing")
        if not np.allclose(psi, -psi[::-1], rtol=0, atol=1e-12):
            raise ParameterError("sample angles must be symmetric about 0")
        if self.rule not in ("cubic_hermite", "quintic_hermite"):
            raise ParameterError(f"unknown interpolation rule {self.rule!r}")
        for name, a in zip(("psi", "f", "fp", "fpp"), arrs):
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if self.rule == "cubic_hermite":
            spline = CubicHermiteSpline(psi, arrs[1], arrs[2])
        else:
            spline = BPoly.from_derivatives(psi, np.stack(arrs[1:], axis=1))
        object.__setattr__(self, "_spline", spline)

    @classmethod
    def from_half(cls, psi, f, fp, fpp, rule: str = "cubic_hermite"):
        """Mirror samples given on [0, half_angle] to the symmetric interval."""
        psi, f, fp, fpp = (np.asarray(a, dtype=float) for a in (psi, f, fp, fpp))
        if psi[0] != 0.0:
            raise ParameterError("half-interval samples must start at psi = 0")
        return cls(
            np.concatenate([-psi[:0:-1], psi]),
            np.concatenate([f[:0:-1], f]),
            np.concatenate([-fp[:0:-1], fp]),
            np.concatenate([fpp[:0:-1], fpp]),
            rule,
        )

    @property
    def half_angle(self) -> float:
        return float(self.psi[-1])

    def evaluate(self, psi):
        psi = np.clip(psi, self.psi[0], self.psi[-1])
        s = self._spline
        return s(psi), s(psi, 1), s(psi, 2)


AngularProfile = Union[CosPowerProfile, PolynomialProfile, TabulatedProfile]


def eval_profile(profile: AngularProfile, psi):
    """Return (f, f', f'') at ``psi`` (scalar or array), radians."""
    psi = _check_domain(psi, profile.half_angle)
    f, fp, fpp = profile.evaluate(psi)
    if psi.ndim == 0:
        return float(f), float(fp), float(fpp)
    return f, fp, fpp


@dataclass(frozen=True)
class PolarWeight:
    """phi(r, psi) = r**alpha * f(psi)."""

    alpha: float
    profile: AngularProfile

    def __post_init__(self):
        if not 1 < self.alpha <= 2:
            raise ParameterError(f"alpha must lie in (1, 2], got {self.alpha!r}")

    @property
    def half_angle(self) -> float:
        return self.profile.half_angle

    @property
    def theta_deg(self) -> float:
        return full_angle_deg(self.half_angle)


def cospow_weight(alpha: float, beta: float, theta_deg: float) -> PolarWeight:
    return PolarWeight(alpha, CosPowerProfile(beta, half_angle(theta_deg)))


def sverak_weight(theta_deg: float, alpha: float = DEFAULT_ALPHA) -> PolarWeight:
    """Cosine-power weight with the exponent tied to the radial degree."""
    return cospow_weight(alpha, alpha, theta_deg)


def poly_weight(alpha: float, even_coeffs: Sequence[float], theta_deg: float) -> PolarWeight:
    return PolarWeight(alpha, PolynomialProfile.from_even(even_coeffs, half_angle(theta_deg)))


@dataclass(frozen=True)
class PolarPoint:
    r: float
    psi: float

    def to_cartesian(self) -> "CartesianPoint":
        return CartesianPoint(self.r * math.cos(self.psi), self.r * math.sin(self.psi))


@dataclass(frozen=True)
class CartesianPoint:
    x: float
    y: float

    def to_polar(self) -> PolarPoint:
        return PolarPoint(math.hypot(self.x, self.y), math.atan2(self.y, self.x))


@dataclass(frozen=True)
class HessianSpectrum:
    lambda_min: float
    lambda_max: float
    eigvec_min: np.ndarray


def eig_sym2(a, b, d):
    """Eigenvalues (min, max) of [[a, b], [b, d]]; works elementwise on arrays.

    The smaller-magnitude root is recovered from the determinant to avoid
    cancellation.
    """
    a, b, d = (np.asarray(v, dtype=float) for v in (a, b, d))
    m = 0.5 * (a + d)
    disc = np.hypot(0.5 * (a - d), b)
    det = a * d - b * b
    big_pos = m + disc
    big_neg = m - disc
    with np.errstate(divide="ignore", invalid="ignore"):
        lo = np.where(m >= 0, np.where(big_pos != 0, det / big_pos, big_neg), big_neg)
        hi = np.where(m >= 0, big_pos, np.where(big_neg != 0, det / big_neg, big_pos))
    # the quotient can land on the wrong side of the pair when disc ~ 0
    lo, hi = np.minimum(lo, hi), np.maximum(lo, hi)
    if lo.ndim == 0:
        return float(lo), float(hi)
    return lo, hi


def spectrum(H) -> HessianSpectrum:
    H = np.asarray(H, dtype=float)
    scale = max(1.0, float(np.max(np.abs(H))))
    if H.shape != (2, 2) or abs(H[0, 1] - H[1, 0]) > 1e-12 * scale:
        raise ValueError("spectrum expects a symmetric 2x2 matrix")
    a, b, d = H[0, 0], 0.5 * (H[0, 1] + H[1, 0]), H[1, 1]
    # normalizing avoids underflow in b*b for tiny entries
    m = max(abs(a), abs(b), abs(d))
    if m > 0:
        a, b, d = a / m, b / m, d / m
    nmin, nmax = eig_sym2(a, b, d)
    lmin, lmax = (nmin * m, nmax * m) if m > 0 else (0.0, 0.0)
    if lmin == lmax or nmin == nmax:
        v = np.array([1.0, 0.0])
    else:
        # two candidate null vectors of H - lmin I; take the longer one
        v1 = np.array([b, nmin - a])
        v2 = np.array([nmin - d, b])
        v = v1 if np.hypot(*v1) >= np.hypot(*v2) else v2
        v = v / np.hypot(*v)
        if v[0] < 0 or (v[0] == 0 and v[1] < 0):
            v = -v
    return HessianSpectrum(lmin, lmax, v)


def polar_frame(alpha, f, fp, fpp):
    """Gradient and Hessian at r = 1 in the orthonormal (e_r, e_psi) frame.

    Returns (g_r, g_psi, h_rr, h_rpsi, h_psipsi). At radius r the gradient
    scales by r**(alpha-1) and the Hessian by r**(alpha-2).
    """
    return (
        alpha * f,
        fp,
        alpha * (alpha - 1) * f,
        (alpha - 1) * fp,
        fpp + alpha * f,
    )


@dataclass(frozen=True)
class WeightGeometry:
    value: float
    gradient: np.ndarray
    hessian: np.ndarray


def _polar_of(weight: PolarWeight, p) -> tuple[float, float]:
    if isinstance(p, PolarPoint):
        r, psi = p.r, p.psi
    else:
        r, psi = math.hypot(p.x, p.y), math.atan2(p.y, p.x)
    if r == 0:
        raise SingularityError("weights are singular at the origin")
    if abs(psi) > weight.half_angle + _ANGLE_SLACK:
        raise DomainError(f"point at angle {psi!r} rad lies outside the cone")
    return r, psi


def weight_geometry(weight: PolarWeight, p: Union[CartesianPoint, PolarPoint]) -> WeightGeometry:
    r, psi = _polar_of(weight, p)
    a = weight.alpha
    f, fp, fpp = eval_profile(weight.profile, psi)
    g_r, g_s, h_rr, h_rs, h_ss = polar_frame(a, f, fp, fpp)
    c, s = math.cos(psi), math.sin(psi)
    R = np.array([[c, -s], [s, c]])
    grad = r ** (a - 1) * (R @ np.array([g_r, g_s]))
    hess = r ** (a - 2) * (R @ np.array([[h_rr, h_rs], [h_rs, h_ss]]) @ R.T)
    hess = 0.5 * (hess + hess.T)
    return WeightGeometry(r**a * f, grad, hess)


def weight_value(weight: PolarWeight, p: Union[CartesianPoint, PolarPoint]) -> float:
    r, psi = _polar_of(weight, p)
    return r**weight.alpha * eval_profile(weight.profile, psi)[0]


# ---------------------------------------------------------------- JSON

def weight_to_dict(weight: PolarWeight) -> dict:
    prof = weight.profile
    theta = weight.theta_deg
    if isinstance(prof, CosPowerProfile):
        return {"family": "cospow", "alpha": weight.alpha, "beta": prof.beta, "theta_deg": theta}
    if isinstance(prof, PolynomialProfile):
        if not prof.pin_boundary:
            raise ParameterError("only boundary-pinned polynomial profiles serialize")
        return {"family": "poly", "alpha": weight.alpha, "coeffs": list(prof.coeffs), "theta_deg": theta}
    raise ParameterError("tabulated profiles have no JSON weight form")


def weight_from_dict(d: dict) -> PolarWeight:
    """Inverse of :func:`weight_to_dict`. ``sverak`` is accepted as cospow with beta = alpha."""
    d = dict(d)
    family = d.pop("family", None)
    try:
        theta = float(d.pop("theta_deg"))
        alpha = float(d.pop("alpha", DEFAULT_ALPHA))
        if family == "cospow":
            w = cospow_weight(alpha, float(d.pop("beta")), theta)
        elif family == "sverak":
            w = sverak_weight(theta, alpha)
        elif family == "poly":
            w = PolarWeight(alpha, PolynomialProfile(tuple(d.pop("coeffs")), half_angle(theta)))
        else:
            raise ParameterError(f"unknown weight family {family!r}")
    except KeyError as e:
        raise ParameterError(f"missing weight field {e.args[0]!r}") from None
    if d:
        raise ParameterError(f"unknown weight fields {sorted(d)}")
    return w
