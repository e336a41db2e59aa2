"""Command-line front end.

Exit status: 0 when the command's verdict passes, 1 when it fails, 2 on
usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .carleman_checks import (
    DEFAULT_EPSILON,
    DEFAULT_TAU,
    G_LEAD,
    TimeWeightParams,
    budget_scan,
    eigen_separation,
    g_cross_section,
    largest_admissible_epsilon,
    tau2_budget,
)
from .elliptic import EllipticWeight, decay_exponents, elliptic_report
from .errors import BracketError, CarlemanError, ConvergenceError, StiffnessError
from .escauriaza import (
    EscauriazaExample,
    backward_heat_residual,
    cone_bound_scan,
    harmonic_residual,
    sample_cone_points,
)
from .extremal_ode import StepControl, shoot
from .io import write_csv, write_json
from .polar_weight import (
    DEFAULT_ALPHA,
    POLY10_ALPHA,
    POLY10_EVEN_COEFFS,
    PolarPoint,
    weight_from_dict,
)
from .pseudoconvexity import DEFAULT_GRID_N, DEFAULT_TOLERANCE, angular_report
from .search import DEFAULT_TOL_DEG, FamilySpec, bisect_min_angle, optimize_params

SVERAK_THETA_DEG = 2 * math.degrees(math.acos(1 / math.sqrt(3)))
FIG2 = {"alpha": 1.999999, "beta": 2.474917, "theta_deg": 95.4}


class ConfigError(CarlemanError, ValueError):
    pass


@dataclass
class RunConfig:
    """Validated options for one subcommand."""

    subcommand: str
    options: dict = field(default_factory=dict)

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        opts = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "config", "func")}
        return cls(ns.subcommand, opts)

    def merge(self, doc: dict) -> "RunConfig":
        """Apply a JSON config document; its keys override command-line flags."""
        doc = dict(doc)
        sub = doc.pop("subcommand", self.subcommand)
        if sub != self.subcommand:
            raise ConfigError(f"config is for {sub!r}, command line says {self.subcommand!r}")
        opts = dict(self.options)
        for k, v in doc.items():
            key = k.replace("-", "_")
            if key not in opts:
                raise ConfigError(f"unknown config key {k!r} for {self.subcommand!r}")
            opts[key] = v
        return RunConfig(self.subcommand, opts)


# ------------------------------------------------------------ helpers

def _family_weight(o: dict, theta_deg: float):
    if o.get("weight"):
        src = o["weight"]
        doc = json.loads(Path(src).read_text()) if Path(src).is_file() else json.loads(src)
        if isinstance(doc, dict) and "theta_deg" not in doc:
            doc["theta_deg"] = theta_deg
        return weight_from_dict(doc)
    return _spec(o).weight(theta_deg)


def _spec(o: dict, free=()) -> FamilySpec:
    fam = o["family"]
    if fam == "sverak":
        return FamilySpec("sverak", {"alpha": o["alpha"] if o["alpha"] is not None else DEFAULT_ALPHA}, tuple(free))
    if fam == "cospow":
        return FamilySpec.cospow(
            o["alpha"] if o["alpha"] is not None else FIG2["alpha"],
            o["beta"] if o["beta"] is not None else FIG2["beta"],
            free,
        )
    spec = FamilySpec.poly10(free)
    params = dict(spec.params)
    if o.get("alpha") is not None:
        params["alpha"] = o["alpha"]
    if o.get("coeffs"):
        even = [float(c) for c in str(o["coeffs"]).split(",")] if not isinstance(o["coeffs"], list) else o["coeffs"]
        degree = 2 * (len(even) - 1)
        params = {"alpha": params["alpha"], **{f"c{2 * i}": c for i, c in enumerate(even)}}
        return FamilySpec("poly", params, tuple(free), degree=degree)
    return FamilySpec("poly", params, tuple(free), degree=spec.degree)


def _emit(o, payload, rows=None):
    write_json(payload, o.get("out"))
    if rows is not None and o.get("csv"):
        write_csv(*rows, o["csv"])


# ------------------------------------------------------------ commands

def cmd_check(o):
    theta = o["theta_deg"]
    w = _family_weight(o, theta)
    rep = angular_report(w, theta, o["grid_n"], o["tolerance"])
    _emit(o, {"command": "check", "family": o["family"], "alpha": w.alpha, **rep.to_dict()}, rep.csv_rows())
    return 0 if rep.admissible else 1


def cmd_scan(o):
    free = tuple(o["free"].split(",")) if o.get("free") else ()
    spec = _spec(o, free)
    try:
        res = bisect_min_angle(
            spec, o["theta_lo"], o["theta_hi"], o["tol_deg"], o["grid_n"], o["tolerance"],
            optimize=bool(free),
        )
    except BracketError as e:
        _emit(o, {"command": "scan", "error": str(e)})
        return 1
    _emit(o, {"command": "scan", "spec": spec.to_dict(), **res.to_dict()})
    return 0 if res.monotone else 1


def cmd_optimize(o):
    free = tuple(o["free"].split(",")) if o.get("free") else ("alpha",)
    spec = _spec(o, free)
    try:
        res = optimize_params(spec, o["theta_deg"], o["grid_n"], o["max_iter"])
        converged = True
    except ConvergenceError as e:
        res, converged = e.best, False
    rep = angular_report(spec.weight(o["theta_deg"], res.params), o["theta_deg"], o["grid_n"], o["tolerance"])
    payload = {"command": "optimize", "spec": spec.to_dict(), "converged": converged,
               "admissible": rep.admissible, **res.to_dict()}
    _emit(o, payload, res.csv_rows(list(spec.free)))
    return 0 if rep.admissible else 1


def cmd_ode(o):
    ctl = StepControl(rtol=o["rtol"], atol=o["rtol"] * 1e-2, max_step=o["max_step"])
    try:
        res = shoot(o["alpha"], ctl)
    except StiffnessError as e:
        res = e.result
    summary = res.summary()
    if res.converged:
        rep = angular_report(res.to_weight(), res.theta_deg, o["grid_n"])
        summary["feedback_min_value"] = rep.min_value
    _emit(o, {"command": "ode", **summary}, res.csv_rows())
    return 0 if res.converged else 1


def cmd_checks(o):
    theta = o["theta_deg"]
    w = FamilySpec.cospow(o["alpha"], o["beta"]).weight(theta)
    g = g_cross_section(w, o["grid_n"], o["lead"])
    eig = eigen_separation(w, o["grid_n"])
    params = TimeWeightParams(w, o["epsilon"], o["tau"])
    scan = budget_scan(w, o["epsilon"])
    b = tau2_budget(params, 0.5, PolarPoint(1.0, 0.0), include_tau_order=o["tau_order"])
    payload = {
        "command": "checks",
        "alpha": o["alpha"], "beta": o["beta"], "theta_deg": theta,
        "g_cross_section": g.to_dict(),
        "eigen_separation": eig.to_dict(),
        "tau2_budget": {
            "epsilon": o["epsilon"],
            "infimum_normalized": scan.infimum,
            "argmin_t": scan.argmin_t,
            "argmin_psi_rad": scan.argmin_psi,
            "positive": scan.positive,
            "largest_epsilon": largest_admissible_epsilon(w),
            "axis_t_half": {"integrand": b.integrand, "epsilon_term": b.epsilon_term,
                             "normalized": b.normalized, "tau_order": b.tau_order},
        },
    }
    _emit(o, payload, g.csv_rows())
    return 0 if (g.positive and eig.separated and scan.positive) else 1


def cmd_elliptic(o):
    if o.get("alpha") is not None:
        w = EllipticWeight(o["alpha"], o["epsilon"])
    else:
        w = EllipticWeight.from_theta_deg(o["theta_deg"], o["epsilon"])
    rep = elliptic_report(w, o["samples"], o["seed"])
    ok = rep["laplacian_positive"] and rep["bracket_max_rel_err"] <= 1e-8
    _emit(o, {"command": "elliptic", **rep})
    return 0 if ok else 1


def cmd_escauriaza(o):
    ex = EscauriazaExample(o["alpha_e"])
    radii = [float(r) for r in str(o["radii"]).split(",")]
    scan = cone_bound_scan(ex, o["theta_deg"], radii, o["t"], o["n_psi"])
    pts = sample_cone_points(ex, o["samples"], seed=o["seed"])
    h_res = max(r / s for r, s in (harmonic_residual(ex, x, y) for x, y in pts))
    v_res = max(r / s for r, s in (backward_heat_residual(ex, x, y, 1.0) for x, y in pts))
    _emit(o, {"command": "escauriaza", **scan.to_dict(),
              "harmonic_scaled_residual": h_res, "backward_heat_scaled_residual": v_res},
          scan.csv_rows())
    return 0 if scan.verdict == "bounded" else 1


def cmd_figure(o):
    fid = o["id"]
    out = o.get("out") or f"fig{fid}.csv"
    if fid in (1, 2):
        if fid == 1:
            # alpha = 2 makes the boundary degeneracy exact at the analytic threshold
            theta = o["theta_deg"] or SVERAK_THETA_DEG
            w = FamilySpec.sverak(o["alpha"] or 2.0).weight(theta)
        else:
            theta = o["theta_deg"] or FIG2["theta_deg"]
            w = FamilySpec.cospow().weight(theta)
        rep = angular_report(w, theta, o["grid_n"])
        write_csv(*rep.csv_rows(), out)
        ok, info = rep.admissible, rep.to_dict()
    else:
        theta = o["theta_deg"] or FIG2["theta_deg"]
        w = FamilySpec.cospow().weight(theta)
        if fid == 3:
            rep = eigen_separation(w, o["grid_n"])
            ok = rep.separated
        else:
            rep = g_cross_section(w, o["grid_n"])
            ok = rep.positive
        write_csv(*rep.csv_rows(), out)
        info = rep.to_dict()
    write_json({"command": "figure", "id": fid, "csv": str(out), "pass": ok, **info}, o.get("json"))
    return 0 if ok else 1


# ------------------------------------------------------------ parser

def _add_common(p, out=True):
    p.add_argument("--config", help="JSON document overriding flags")
    p.add_argument("--grid-n", type=int, default=DEFAULT_GRID_N)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    if out:
        p.add_argument("--out", help="JSON report path (default stdout)")
        p.add_argument("--csv", help="CSV series path")


def _add_family(p, default="cospow"):
    p.add_argument("--family", choices=("sverak", "cospow", "poly"), default=default)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--coeffs", help="comma-separated even coefficients c0,c2,... (poly)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="carleman", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("check", help="pseudoconvexity report for one weight")
    _add_family(p)
    p.add_argument("--weight", help="weight JSON (string or path); overrides family flags")
    p.add_argument("--theta-deg", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan", help="bisect for the minimal admissible angle")
    _add_family(p, "sverak")
    p.add_argument("--theta-lo", type=float, default=90.0)
    p.add_argument("--theta-hi", type=float, default=130.0)
    p.add_argument("--tol-deg", type=float, default=DEFAULT_TOL_DEG)
    p.add_argument("--free", help="comma-separated free parameters; optimizes at each angle")
    _add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("optimize", help="maximize the normalized margin over free parameters")
    _add_family(p)
    p.add_argument("--theta-deg", type=float, required=True)
    p.add_argument("--free", help="comma-separated free parameters (default alpha)")
    p.add_argument("--max-iter", type=int, default=2000)
    _add_common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("ode", help="shoot the equality case")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--max-step", type=float, default=0.005)
    _add_common(p)
    p.set_defaults(func=cmd_ode)

    p = sub.add_parser("checks", help="cross-section, eigenvalue and tau^2 budget checks")
    p.add_argument("--alpha", type=float, default=FIG2["alpha"])
    p.add_argument("--beta", type=float, default=FIG2["beta"])
    p.add_argument("--theta-deg", type=float, default=FIG2["theta_deg"])
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--lead", type=float, default=G_LEAD)
    p.add_argument("--tau-order", action="store_true", help="also report order-tau terms")
    _add_common(p)
    p.set_defaults(func=cmd_checks)

    p = sub.add_parser("elliptic", help="limiting Carleman weight identities")
    p.add_argument("--theta-deg", type=float, default=120.0)
    p.add_argument("--alpha", type=float)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_elliptic)

    p = sub.add_parser("escauriaza", help="counterexample residuals and cone boundedness")
    p.add_argument("--alpha-e", type=float, default=3.0)
    p.add_argument("--theta-deg", type=float, default=55.0)
    p.add_argument("--radii", default="1,10,100,1000")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--n-psi", type=int, default=201)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_escauriaza)

    p = sub.add_parser("figure", help="emit the CSV series behind a figure")
    p.add_argument("--id", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--theta-deg", type=float)
    p.add_argument("--alpha", type=float, help="radial degree of the figure 1 weight (default 2)")
    p.add_argument("--json", help="summary JSON path (default stdout)")
    p.add_argument("--out", help="CSV path (default figN.csv)")
    _add_common(p, out=False)
    p.set_defaults(func=cmd_figure)
    return ap


COMMANDS = {
    "check": cmd_check, "scan": cmd_scan, "optimize": cmd_optimize, "ode": cmd_ode,
    "checks": cmd_checks, "elliptic": cmd_elliptic, "escauriaza": cmd_escauriaza,
    "figure": cmd_figure,
}


def run(config: RunConfig) -> int:
    return COMMANDS[config.subcommand](config.options)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_namespace(ns)
        if ns.config:
            cfg = cfg.merge(json.loads(Path(ns.config).read_text()))
        return run(cfg)
    except (CarlemanError, ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"carleman {ns.subcommand}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
