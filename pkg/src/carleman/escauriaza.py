"""Escauriaza's counterexample in narrow cones.

h(x) = Re exp(-(x1 + i x2)**a), a > 2, is entire-harmonic (away from the cut
for non-integer a). Its Appell transform

    v(x, t) = t**-1 * exp(|x|^2 / (4t)) * h(x / t)

solves dt v + lap v = 0 for t > 0 and tends to 0 as t -> 0+ inside cones of
opening < pi/a. The 1/t factor is the two-dimensional Appell normalization;
without it the function is not caloric. Magnitudes are tracked in log form
because v grows doubly exponentially outside the cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, DomainError, ParameterError
from .units import half_angle


@dataclass(frozen=True)
class EscauriazaExample:
    alpha_e: float = 3.0
    offset: tuple = (1.0, 1.0)
    h: float = 1e-4

    def __post_init__(self):
        if not self.alpha_e > 2:
            raise ParameterError(f"exponent must exceed 2, got {self.alpha_e!r}")

    @property
    def integer_power(self) -> bool:
        return float(self.alpha_e).is_integer()

    @property
    def critical_angle_deg(self) -> float:
        return 180.0 / self.alpha_e


def _zpow(ex: EscauriazaExample, z: complex) -> complex:
    if ex.integer_power:
        return z ** int(ex.alpha_e)
    if z.imag == 0 and z.real <= 0:
        raise BranchError(f"{z!r} lies on the branch cut of z**{ex.alpha_e!r}")
    return z**ex.alpha_e


def harmonic_h(ex: EscauriazaExample, x: float, y: float) -> float:
    w = _zpow(ex, complex(x, y))
    return math.exp(-w.real) * math.cos(w.imag)


def log_abs_v(ex: EscauriazaExample, x: float, y: float, t: float) -> float:
    """log|v(x, t)|, finite even where |v| overflows (-inf at zeros of v)."""
    if not t > 0:
        raise DomainError(f"v needs t > 0, got {t!r}")
    w = -_zpow(ex, complex(x / t, y / t))
    c = abs(math.cos(w.imag))
    return (x * x + y * y) / (4 * t) - math.log(t) + w.real + (math.log(c) if c > 0 else -math.inf)


def appell_v(ex: EscauriazaExample, x: float, y: float, t: float) -> float:
    if not t > 0:
        raise DomainError(f"v needs t > 0, got {t!r}")
    w = -_zpow(ex, complex(x / t, y / t))
    e = (x * x + y * y) / (4 * t) + w.real
    if e < -745:
        return 0.0
    if e > 709:
        return math.copysign(math.inf, math.cos(w.imag))
    return math.exp(e) * math.cos(w.imag) / t


def appell_dt_v(ex: EscauriazaExample, x: float, y: float, t: float) -> float:
    """Analytic time derivative of v by the chain rule."""
    if not t > 0:
        raise DomainError(f"v needs t > 0, got {t!r}")
    zt = _zpow(ex, complex(x / t, y / t))
    e = (x * x + y * y) / (4 * t)
    hv = math.exp(-zt.real) * math.cos(-zt.imag)
    # d/dt Re exp(-(z/t)^a) = Re[exp(-(z/t)^a) * a (z/t)^a] / t
    dh = (np.exp(-zt) * ex.alpha_e * zt).real / t
    pref = math.exp(e) / t
    return pref * (dh - (e / t + 1 / t) * hv)


def appell_u(ex: EscauriazaExample, x: float, y: float, t: float) -> float:
    """Translated, time-reflected u(x, t) = v(x + offset, 1 - t)."""
    if not t < 1:
        raise DomainError(f"u needs t < 1, got {t!r}")
    return appell_v(ex, x + ex.offset[0], y + ex.offset[1], 1 - t)


def fd_laplacian(fn, x: float, y: float, h: float) -> tuple[float, float]:
    """Five-point Laplacian and the magnitude scale 1 + |f_xx| + |f_yy|."""
    c = fn(x, y)
    fxx = (fn(x + h, y) - 2 * c + fn(x - h, y)) / h**2
    fyy = (fn(x, y + h) - 2 * c + fn(x, y - h)) / h**2
    return fxx + fyy, 1 + abs(fxx) + abs(fyy)


def harmonic_residual(ex: EscauriazaExample, x: float, y: float) -> tuple[float, float]:
    """(|lap h|, scale) by finite differences."""
    lap, scale = fd_laplacian(lambda a, b: harmonic_h(ex, a, b), x, y, ex.h)
    return abs(lap), scale


def backward_heat_residual(ex: EscauriazaExample, x: float, y: float, t: float) -> tuple[float, float]:
    """(|dt v + lap v|, scale) by finite differences in x and t."""
    h = ex.h
    lap, scale = fd_laplacian(lambda a, b: appell_v(ex, a, b, t), x, y, h)
    dt = (appell_v(ex, x, y, t + h) - appell_v(ex, x, y, t - h)) / (2 * h)
    return abs(dt + lap), scale + abs(dt)


def sample_cone_points(ex: EscauriazaExample, n: int, seed: int = 0, theta_deg: float | None = None,
                       r_range=(0.5, 2.0)):
    """Random points strictly inside the cone of opening ``theta_deg`` (default 0.9 * pi/a)."""
    if theta_deg is None:
        theta_deg = 0.9 * ex.critical_angle_deg
    rng = np.random.default_rng(seed)
    r = rng.uniform(*r_range, n)
    psi = rng.uniform(-0.95, 0.95, n) * half_angle(theta_deg)
    return list(zip((r * np.cos(psi)).tolist(), (r * np.sin(psi)).tolist()))


@dataclass(frozen=True, eq=False)
class ConeBoundReport:
    alpha_e: float
    theta_deg: float
    t: float
    radii: np.ndarray
    psi: np.ndarray
    log10_sup: np.ndarray  # per radius
    log10_abs: np.ndarray  # shape (len(radii), len(psi))
    verdict: str

    def to_dict(self) -> dict:
        return {
            "alpha_e": self.alpha_e,
            "theta_deg": self.theta_deg,
            "t": self.t,
            "radii": self.radii.tolist(),
            "log10_sup_abs_v": self.log10_sup.tolist(),
            "verdict": self.verdict,
        }

    def csv_rows(self):
        rows = []
        for i, r in enumerate(self.radii.tolist()):
            for j, s in enumerate(self.psi.tolist()):
                la = float(self.log10_abs[i, j])
                rows.append((r, s, 10.0**la if la < 308 else math.inf))
        return ["r", "psi_rad", "abs_v"], rows


def cone_bound_scan(ex: EscauriazaExample, theta_deg: float, radii, t: float = 1.0, n_psi: int = 201) -> ConeBoundReport:
    """sup |v(., t)| over the arc of each radius inside the cone of opening ``theta_deg``.

    Verdict ``unbounded`` if the sup grows by more than a factor 10 between
    successive radii, ``bounded`` if it is non-increasing over the last radii,
    else ``inconclusive``.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0) or not np.all(np.isfinite(radii)):
        raise ParameterError("radii must be finite and positive")
    half = half_angle(theta_deg)
    psi = np.linspace(-half, half, n_psi) if n_psi > 1 else np.array([0.0])
    logs = np.empty((len(radii), len(psi)))
    for i, r in enumerate(radii):
        for j, s in enumerate(psi):
            logs[i, j] = log_abs_v(ex, r * math.cos(s), r * math.sin(s), t) / math.log(10)
    sup = logs.max(axis=1)
    growth = np.diff(sup)
    if np.any(growth > 1.0):
        verdict = "unbounded"
    elif len(sup) < 2 or growth[-1] <= 0:
        verdict = "bounded"
    else:
        verdict = "inconclusive"
    return ConeBoundReport(ex.alpha_e, float(theta_deg), t, radii, psi, sup, logs, verdict)
