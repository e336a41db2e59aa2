"""Parabolic pseudoconvexity: the cubic angular inequality and its symbol-level form."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .polar_weight import (
    PolarPoint,
    PolarWeight,
    eval_profile,
    spectrum,
    weight_geometry,
)
from .units import half_angle

DEFAULT_GRID_N = 4001
DEFAULT_TOLERANCE = 1e-9


def _check_alpha(alpha):
    # alpha = 1 is kept as the degenerate endpoint of the family
    if not 1 <= alpha <= 2:
        raise ParameterError(f"alpha must lie in [1, 2], got {alpha!r}")


def sqrt_argument(alpha, f, fp, fpp):
    """Radicand of the angular inequality, written as a sum of squares."""
    return ((alpha - 2) * alpha * f - fpp) ** 2 + 4 * (alpha - 1) ** 2 * fp**2


def eq6_value(alpha, f, fp, fpp):
    """Left-hand side of the cubic angular pseudoconvexity inequality.

    Works elementwise on arrays. Nonnegativity of this quantity along the
    cross-section is the admissibility condition for r**alpha * f(psi).
    """
    _check_alpha(alpha)
    f, fp, fpp = (np.asarray(v, dtype=float) for v in (f, fp, fpp))
    a = alpha
    out = (
        (a - 1) * a**3 * f**3
        + a * (2 * a - 1) * f * fp**2
        + fp**2 * fpp
        + 0.5 * (a * a * f * f + fp * fp) * (a * a * f + fpp - np.sqrt(sqrt_argument(a, f, fp, fpp)))
    )
    return float(out) if out.ndim == 0 else out


def commutator_density(weight: PolarWeight, p: PolarPoint) -> float:
    """grad.H.grad + |grad|^2 * lambda_min(H), without the 4 tau^3 prefactor."""
    geo = weight_geometry(weight, p)
    g = geo.gradient
    lam = spectrum(geo.hessian).lambda_min
    return float(g @ geo.hessian @ g + (g @ g) * lam)


def _measure_c_star() -> float:
    # alpha = 2, f = 1: density = 16 r^2 and the angular value is 2*(2-1)*8 = 16
    from .polar_weight import PolynomialProfile

    w = PolarWeight(2.0, PolynomialProfile((1.0,), math.pi / 2, pin_boundary=False))
    return eq6_value(2.0, 1.0, 0.0, 0.0) / commutator_density(w, PolarPoint(1.0, 0.0))


C_STAR = _measure_c_star()


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("CARLEMAN_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True, eq=False)
class PseudoconvexityReport:
    theta_deg: float
    grid_n: int
    psi: np.ndarray
    values: np.ndarray
    min_value: float
    argmin_psi: float
    admissible: bool
    tolerance: float

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.values))))

    def to_dict(self, include_values: bool = False) -> dict:
        d = {
            "theta_deg": self.theta_deg,
            "grid_n": self.grid_n,
            "min_value": self.min_value,
            "argmin_psi_rad": self.argmin_psi,
            "admissible": self.admissible,
            "tolerance": self.tolerance,
            "scale": self.scale,
        }
        if include_values:
            d["psi_rad"] = self.psi.tolist()
            d["eq6_value"] = self.values.tolist()
        return d

    def csv_rows(self):
        return ["psi_rad", "eq6_value"], zip(self.psi.tolist(), self.values.tolist())


def symmetric_grid(half: float, grid_n: int) -> np.ndarray:
    if grid_n < 3 or grid_n % 2 == 0:
        raise ParameterError(f"grid size must be odd and >= 3, got {grid_n}")
    psi = np.linspace(-half, half, grid_n)
    psi[grid_n // 2] = 0.0
    return psi


def _eval_chunk(weight: PolarWeight, psi: np.ndarray) -> np.ndarray:
    f, fp, fpp = eval_profile(weight.profile, psi)
    return eq6_value(weight.alpha, f, fp, fpp)


def grid_values(weight: PolarWeight, psi: np.ndarray, workers: int | None = None) -> np.ndarray:
    """Evaluate the angular functional on ``psi``, optionally in chunks on a thread pool."""
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(psi) < 2 * workers:
        return _eval_chunk(weight, psi)
    chunks = np.array_split(psi, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: _eval_chunk(weight, c), chunks))
    return np.concatenate(parts)


def min_argmin(psi: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    """Minimum and its location; ties go to the smallest angle."""
    m = float(np.min(values))
    return m, float(np.min(psi[values == m]))


def angular_report(
    weight: PolarWeight,
    theta_deg: float | None = None,
    grid_n: int = DEFAULT_GRID_N,
    tolerance: float = DEFAULT_TOLERANCE,
    workers: int | None = None,
) -> PseudoconvexityReport:
    """Admissibility report over the closed cross-section [-theta/2, theta/2]."""
    if theta_deg is None:
        theta_deg = weight.theta_deg
    half = half_angle(theta_deg)
    if abs(half - weight.half_angle) > 1e-9:
        raise ParameterError(
            f"theta_deg={theta_deg!r} does not match the profile opening {weight.theta_deg!r}"
        )
    psi = symmetric_grid(weight.half_angle, grid_n)
    values = grid_values(weight, psi, workers)
    m, at = min_argmin(psi, values)
    scale = max(1.0, float(np.max(np.abs(values))))
    return PseudoconvexityReport(
        theta_deg=float(theta_deg),
        grid_n=grid_n,
        psi=psi,
        values=values,
        min_value=m,
        argmin_psi=at,
        admissible=bool(m >= -tolerance * scale),
        tolerance=tolerance,
    )
