"""Shooting for the equality case of the angular pseudoconvexity inequality.

The equality defines f'' only implicitly. For fixed (f, f') the functional is
nondecreasing in f'' (strictly once f' != 0), so the root is unique away from
the degenerate endpoint alpha = 1; we still track it by continuity from the
previous value. The profile starts symmetric, f(0) = 1, f'(0) = 0, and the
half-angle is where it first reaches zero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import RK45
from scipy.optimize import brentq

from .errors import DegenerateRootWarning, NoRootError, ParameterError, StiffnessError
from .polar_weight import PolarWeight, TabulatedProfile
from .pseudoconvexity import eq6_value
from .units import full_angle_deg

ROOT_RTOL = 1e-10
MAX_DOUBLINGS = 20


def _scale(f, fp, fpp):
    return max(1.0, abs(f) ** 3, abs(fp) ** 3, abs(fpp) ** 3)


def solve_fpp(alpha: float, f: float, fp: float, fpp_guess: float, window: float = 1.0) -> float:
    """Root f'' of the equality case nearest ``fpp_guess``."""
    if not 1 <= alpha <= 2:
        raise ParameterError(f"alpha must lie in [1, 2], got {alpha!r}")
    if f < 0:
        raise ParameterError(f"profile value must be nonnegative, got {f!r}")
    if alpha == 1 and fp == 0:
        warnings.warn("alpha = 1 with f' = 0: every f'' >= -f is a root", DegenerateRootWarning)

    def g(x):
        return eq6_value(alpha, f, fp, x)

    g0 = g(fpp_guess)
    if abs(g0) <= ROOT_RTOL * _scale(f, fp, fpp_guess):
        return float(fpp_guess)
    # nondecreasing in f'': a positive value means the root lies below the guess
    direction = -1.0 if g0 > 0 else 1.0
    w = window
    inner = fpp_guess
    for _ in range(MAX_DOUBLINGS + 1):
        outer = fpp_guess + direction * w
        go = g(outer)
        if go == 0:
            return float(outer)
        if (go > 0) != (g0 > 0):
            lo, hi = sorted((inner, outer))
            root = brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            if abs(g(root)) > ROOT_RTOL * _scale(f, fp, root):
                raise NoRootError(f"root refinement failed near f''={root!r}")
            return float(root)
        inner = outer
        w *= 2
    raise NoRootError(
        f"no sign change within {window * 2**MAX_DOUBLINGS!r} of f''={fpp_guess!r} "
        f"(alpha={alpha!r}, f={f!r}, f'={fp!r})"
    )


@dataclass(frozen=True)
class StepControl:
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = 0.005
    first_step: float = 1e-4
    min_step: float = 1e-12
    event_tol: float = 1e-12
    residual_tol: float = 1e-8

    def refined(self, factor: float = 10.0) -> "StepControl":
        return StepControl(
            self.rtol / factor, self.atol / factor, self.max_step, self.first_step,
            self.min_step, self.event_tol, self.residual_tol,
        )


@dataclass(frozen=True, eq=False)
class ShootingResult:
    alpha: float
    trajectory: np.ndarray  # columns psi, f, fp, fpp
    half_angle: float
    converged: bool
    max_residual: float
    message: str = ""

    @property
    def theta_deg(self) -> float:
        return full_angle_deg(self.half_angle)

    def to_profile(self) -> TabulatedProfile:
        """Mirror the accepted steps into a quintic Hermite profile on [-half, half]."""
        if not self.converged:
            raise ParameterError("only converged shots can be tabulated")
        t = self.trajectory
        return TabulatedProfile.from_half(t[:, 0], t[:, 1], t[:, 2], t[:, 3], rule="quintic_hermite")

    def to_weight(self) -> PolarWeight:
        return PolarWeight(self.alpha, self.to_profile())

    def summary(self) -> dict:
        return {
            "alpha": self.alpha,
            "half_angle_rad": self.half_angle,
            "theta_deg": self.theta_deg,
            "converged": self.converged,
            "max_residual": self.max_residual,
            "steps": int(len(self.trajectory)),
            "message": self.message,
        }

    def csv_rows(self):
        return ["psi_rad", "f", "fp", "fpp"], (tuple(row) for row in self.trajectory.tolist())


def shoot(alpha: float, control: StepControl | None = None) -> ShootingResult:
    """Integrate the equality case from psi = 0 until the profile vanishes."""
    if not 1 < alpha < 2:
        raise ParameterError(f"alpha must lie in (1, 2), got {alpha!r}")
    c = control or StepControl()
    guess = [-alpha * alpha]  # exact root at f = 1, f' = 0

    def rhs(t, y):
        guess[0] = solve_fpp(alpha, max(y[0], 0.0), y[1], guess[0])
        return np.array([y[1], guess[0]])

    fpp0 = solve_fpp(alpha, 1.0, 0.0, guess[0])
    rows = [(0.0, 1.0, 0.0, fpp0)]
    max_res = abs(eq6_value(alpha, 1.0, 0.0, fpp0))
    solver = RK45(
        rhs, 0.0, np.array([1.0, 0.0]), math.pi / 2,
        rtol=c.rtol, atol=c.atol, max_step=c.max_step, first_step=c.first_step,
    )

    def result(half, converged, msg):
        return ShootingResult(
            alpha, np.array(rows), half, converged, max_res, msg
        )

    while solver.status == "running":
        t_prev = solver.t
        try:
            msg = solver.step()
        except NoRootError as e:
            raise StiffnessError(str(e), result(rows[-1][0], False, str(e))) from e
        if solver.status == "failed" or (solver.step_size or 0.0) < c.min_step:
            text = f"step collapsed at psi={solver.t!r}: {msg or 'step below minimum'}"
            raise StiffnessError(text, result(rows[-1][0], False, text))
        dense = solver.dense_output()
        f, fp = solver.y
        if f <= 0:
            half = brentq(lambda p: dense(p)[0], t_prev, solver.t, xtol=c.event_tol)
            fp_end = float(dense(half)[1])
            fpp = solve_fpp(alpha, 0.0, fp_end, guess[0])
            rows.append((half, 0.0, fp_end, fpp))
            return result(half, True, "profile vanished")
        fpp = solve_fpp(alpha, f, fp, guess[0])
        res = abs(eq6_value(alpha, f, fp, fpp))
        max_res = max(max_res, res)
        if res > c.residual_tol * (1 + abs(f) ** 3):
            text = f"residual {res!r} above tolerance at psi={solver.t!r}"
            raise StiffnessError(text, result(rows[-1][0], False, text))
        rows.append((solver.t, f, fp, fpp))
    return result(math.nan, False, "reached psi = pi/2 without a zero")
