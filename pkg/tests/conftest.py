import math

import numpy as np
import pytest
from hypothesis import settings

from carleman.polar_weight import POLY10_EVEN_COEFFS, cospow_weight, poly_weight, sverak_weight

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

COSPOW = dict(alpha=1.999999, beta=2.474917, theta_deg=95.4)


def family_weights():
    return {
        "sverak": sverak_weight(110.0),
        "cospow": cospow_weight(COSPOW["alpha"], COSPOW["beta"], COSPOW["theta_deg"]),
        "poly": poly_weight(1.99999, POLY10_EVEN_COEFFS, 95.0),
    }


@pytest.fixture(params=["sverak", "cospow", "poly"])
def family_weight(request):
    return family_weights()[request.param]


def interior_points(weight, n, seed=0, margin=0.95, r_range=(0.2, 5.0)):
    rng = np.random.default_rng(seed)
    r = rng.uniform(*r_range, n)
    psi = rng.uniform(-margin, margin, n) * weight.half_angle
    return list(zip(r.tolist(), psi.tolist()))


def rel_err(a, b):
    """Max-norm error of a relative to the max-norm of b."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b)) / max(float(np.max(np.abs(b))), 1e-300))


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
