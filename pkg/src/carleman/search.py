"""Minimal admissible opening angles and parameter optimization per weight family."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import BracketError, ConvergenceError, NonMonotoneWarning, ParameterError
from .polar_weight import (
    DEFAULT_ALPHA,
    POLY10_ALPHA,
    POLY10_EVEN_COEFFS,
    PolarWeight,
    cospow_weight,
    eval_profile,
    poly_weight,
    sverak_weight,
)
from .pseudoconvexity import DEFAULT_GRID_N, DEFAULT_TOLERANCE, angular_report, eq6_value, symmetric_grid

FAMILIES = ("sverak", "cospow", "poly")
ALPHA_MIN = 1.0 + 1e-6
ALPHA_MAX = 2.0
DEFAULT_TOL_DEG = 0.05


def _param_names(family: str, degree: int) -> tuple:
    if family == "sverak":
        return ("alpha",)
    if family == "cospow":
        return ("alpha", "beta")
    if family == "poly":
        return ("alpha",) + tuple(f"c{k}" for k in range(0, degree + 1, 2))
    raise ParameterError(f"unknown family {family!r}")


_DEFAULT_BOUNDS = {"alpha": (ALPHA_MIN, ALPHA_MAX), "beta": (0.1, 20.0)}


@dataclass(frozen=True)
class FamilySpec:
    """A weight family with parameter values, the subset that is free, and bounds.

    For ``poly`` the parameters are ``alpha`` and the even coefficients
    ``c0, c2, ..., c<degree>``; ``c0`` is always overwritten so the profile
    vanishes at the cone boundary, so it is never free.
    """

    family: str
    params: dict
    free: tuple = ()
    bounds: dict = field(default_factory=dict)
    degree: int = 10

    def __post_init__(self):
        names = _param_names(self.family, self.degree)
        missing = [n for n in names if n not in self.params]
        extra = [n for n in self.params if n not in names]
        if missing or extra:
            raise ParameterError(f"{self.family}: missing {missing}, unexpected {extra}")
        if any(n not in names for n in self.free):
            raise ParameterError(f"free parameters {self.free} not in {names}")
        if "c0" in self.free:
            raise ParameterError("c0 is fixed by the boundary condition")
        b = {n: _DEFAULT_BOUNDS.get(n, (-50.0, 50.0)) for n in names}
        b.update(self.bounds)
        lo, hi = b["alpha"]
        b["alpha"] = (max(lo, ALPHA_MIN), min(hi, ALPHA_MAX))
        for n, (lo, hi) in b.items():
            if not lo <= hi:
                raise ParameterError(f"inconsistent bounds for {n}: {(lo, hi)}")
        object.__setattr__(self, "bounds", b)

    @property
    def names(self) -> tuple:
        return _param_names(self.family, self.degree)

    @classmethod
    def sverak(cls, alpha: float = DEFAULT_ALPHA, free: bool = False) -> "FamilySpec":
        return cls("sverak", {"alpha": alpha}, ("alpha",) if free else ())

    @classmethod
    def cospow(cls, alpha: float = DEFAULT_ALPHA, beta: float = 2.474917, free=()) -> "FamilySpec":
        return cls("cospow", {"alpha": alpha, "beta": beta}, tuple(free))

    @classmethod
    def poly10(cls, free=()) -> "FamilySpec":
        params = {"alpha": POLY10_ALPHA}
        params.update({f"c{2 * i}": c for i, c in enumerate(POLY10_EVEN_COEFFS)})
        return cls("poly", params, tuple(free), degree=10)

    def clamp(self, params: dict) -> dict:
        out = dict(params)
        for n in self.free:
            lo, hi = self.bounds[n]
            out[n] = float(min(max(out[n], lo), hi))
        return out

    def weight(self, theta_deg: float, params: dict | None = None) -> PolarWeight:
        p = self.params if params is None else params
        if self.family == "sverak":
            return sverak_weight(theta_deg, p["alpha"])
        if self.family == "cospow":
            return cospow_weight(p["alpha"], p["beta"], theta_deg)
        even = [p[f"c{k}"] for k in range(0, self.degree + 1, 2)]
        return poly_weight(p["alpha"], even, theta_deg)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "free": list(self.free),
            "bounds": {k: list(v) for k, v in self.bounds.items()},
            "degree": self.degree,
        }


def normalized_margin(weight: PolarWeight, grid_n: int = DEFAULT_GRID_N) -> float:
    """min over the cross-section of the angular functional / (1 + |f|^3 + |f'|^3 + |f''|^3).

    The denominator stops an optimizer from gaining margin by rescaling the
    profile, which the cubic homogeneity would otherwise allow.
    """
    psi = symmetric_grid(weight.half_angle, grid_n)
    f, fp, fpp = eval_profile(weight.profile, psi)
    v = eq6_value(weight.alpha, f, fp, fpp)
    return float(np.min(v / (1 + np.abs(f) ** 3 + np.abs(fp) ** 3 + np.abs(fpp) ** 3)))


@dataclass(frozen=True)
class OptimizeResult:
    params: dict
    margin: float
    iterations: int
    theta_deg: float
    trace: tuple  # (iter, margin, params...) rows

    def to_dict(self) -> dict:
        return {
            "theta_deg": self.theta_deg,
            "params": self.params,
            "margin": self.margin,
            "iterations": self.iterations,
        }

    def csv_rows(self, names):
        return ["iter", "margin", *names], self.trace


def optimize_params(
    spec: FamilySpec,
    theta_deg: float,
    grid_n: int = DEFAULT_GRID_N,
    max_iter: int = 2000,
    initial_step: float = 0.05,
) -> OptimizeResult:
    """Nelder-Mead on the free parameters, maximizing the normalized margin.

    The seed simplex is deterministic: the start point plus one relative step
    along each free coordinate. Parameters are clamped to their bounds before
    every evaluation, so returned values always respect them.
    """
    if not spec.free:
        raise ParameterError("optimize_params needs at least one free parameter")
    names = spec.free
    x0 = np.array([spec.params[n] for n in names], dtype=float)
    simplex = [x0]
    for i in range(len(names)):
        x = x0.copy()
        x[i] += initial_step * (abs(x[i]) if x[i] != 0 else 1.0)
        simplex.append(x)
    trace = []
    best = [-math.inf, dict(spec.params)]

    def params_of(x):
        p = dict(spec.params)
        p.update(zip(names, (float(v) for v in x)))
        return spec.clamp(p)

    def objective(x):
        p = params_of(x)
        try:
            m = normalized_margin(spec.weight(theta_deg, p), grid_n)
        except ParameterError:
            return math.inf
        if not math.isfinite(m):
            return math.inf
        if m > best[0]:
            best[0], best[1] = m, p
        return -m

    def callback(xk):
        p = params_of(xk)
        trace.append((len(trace) + 1, best[0], *(p[n] for n in names)))

    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        callback=callback,
        options={
            "initial_simplex": np.array(simplex),
            "maxiter": max_iter,
            "maxfev": 4 * max_iter,
            "xatol": 1e-9,
            "fatol": 1e-12,
        },
    )
    out = OptimizeResult(dict(best[1]), float(best[0]), int(res.nit), float(theta_deg), tuple(trace))
    if not res.success and res.nit >= max_iter:
        raise ConvergenceError(f"Nelder-Mead hit {max_iter} iterations", best=out)
    return out


@dataclass(frozen=True)
class ScanResult:
    family: str
    theta_min_deg: float
    bracket: tuple
    iterations: int
    history: tuple  # (theta_deg, admissible, margin, params)
    grid_n: int
    tolerance: float
    tol_deg: float
    probes: tuple  # (theta_deg, admissible)
    monotone: bool

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "theta_min_deg": self.theta_min_deg,
            "bracket_deg": list(self.bracket),
            "iterations": self.iterations,
            "grid_n": self.grid_n,
            "tolerance": self.tolerance,
            "tol_deg": self.tol_deg,
            "monotone": self.monotone,
            "probes": [list(p) for p in self.probes],
            "history": [
                {"theta_deg": t, "admissible": a, "margin": m, "params": p}
                for t, a, m, p in self.history
            ],
        }


def evaluate_angle(spec: FamilySpec, theta_deg: float, grid_n: int, tolerance: float, optimize: bool):
    """(admissible, margin, params) at one opening angle."""
    params = dict(spec.params)
    if optimize and spec.free:
        try:
            params = optimize_params(spec, theta_deg, grid_n).params
        except ConvergenceError as e:
            params = e.best.params
    w = spec.weight(theta_deg, params)
    rep = angular_report(w, theta_deg, grid_n, tolerance)
    return rep.admissible, normalized_margin(w, grid_n), params


def bisect_min_angle(
    spec: FamilySpec,
    theta_lo: float,
    theta_hi: float,
    tol_deg: float = DEFAULT_TOL_DEG,
    grid_n: int = DEFAULT_GRID_N,
    tolerance: float = DEFAULT_TOLERANCE,
    optimize: bool = False,
    n_probes: int = 5,
) -> ScanResult:
    """Bisect for the smallest admissible opening angle in [theta_lo, theta_hi] degrees.

    Admissibility is assumed monotone in the angle; this is checked afterwards
    at ``n_probes`` angles and a NonMonotoneWarning is issued on contradiction.
    """
    history = []

    def pred(theta):
        ok, m, p = evaluate_angle(spec, theta, grid_n, tolerance, optimize)
        history.append((float(theta), bool(ok), m, p))
        return ok

    if pred(theta_lo) == pred(theta_hi):
        raise BracketError(
            f"admissibility agrees at {theta_lo}° and {theta_hi}°; no threshold bracketed"
        )
    if history[0][1]:
        raise BracketError(f"lower endpoint {theta_lo}° is already admissible")
    lo, hi = float(theta_lo), float(theta_hi)
    it = 0
    while hi - lo > tol_deg:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    probes = []
    monotone = True
    for th in np.linspace(theta_lo, theta_hi, n_probes + 2)[1:-1].tolist():
        ok = pred(th)
        probes.append((th, ok))
        # only probes clearly outside the final bracket can contradict
        if (th >= hi and not ok) or (th <= lo and ok):
            monotone = False
    if not monotone:
        warnings.warn(f"admissibility of {spec.family} not monotone in the angle", NonMonotoneWarning)
    return ScanResult(
        family=spec.family,
        theta_min_deg=hi,
        bracket=(lo, hi),
        iterations=it,
        history=tuple(history),
        grid_n=grid_n,
        tolerance=tolerance,
        tol_deg=tol_deg,
        probes=tuple(probes),
        monotone=monotone,
    )
