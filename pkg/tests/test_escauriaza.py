import math

import numpy as np
import pytest

from carleman.errors import BranchError, DomainError, ParameterError
from carleman.escauriaza import (
    EscauriazaExample,
    appell_dt_v,
    appell_u,
    appell_v,
    backward_heat_residual,
    cone_bound_scan,
    harmonic_h,
    harmonic_residual,
    log_abs_v,
    sample_cone_points,
)

EX = EscauriazaExample()


def test_h_closed_forms():
    assert harmonic_h(EX, 1.0, 0.0) == pytest.approx(math.exp(-1), rel=1e-15)
    assert harmonic_h(EscauriazaExample(4.0), 0.0, 1.0) == pytest.approx(math.exp(-1), rel=1e-15)


def test_v_closed_form():
    assert appell_v(EX, 1.0, 0.0, 1.0) == pytest.approx(math.exp(-0.75), rel=1e-15)
    assert math.exp(log_abs_v(EX, 1.0, 0.0, 1.0)) == pytest.approx(math.exp(-0.75), rel=1e-14)


@pytest.mark.parametrize("alpha_e", [3.0, 2.5, 4.0])
def test_harmonic_residual(alpha_e):
    ex = EscauriazaExample(alpha_e)
    for x, y in sample_cone_points(ex, 50, seed=7):
        res, scale = harmonic_residual(ex, x, y)
        assert res <= 1e-4 * scale


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_backward_heat_residual(t):
    for x, y in sample_cone_points(EX, 50, seed=8):
        res, scale = backward_heat_residual(EX, x, y, t)
        assert res <= 1e-3 * scale


def test_missing_prefactor_is_not_caloric():
    # without the 1/t factor the same residual is O(1)
    x, y, t, h = 1.0, 0.2, 1.0, 1e-4

    def w(a, b, s):
        return appell_v(EX, a, b, s) * s

    lap = sum(w(x + dx, y + dy, t) for dx, dy in ((h, 0), (-h, 0), (0, h), (0, -h))) - 4 * w(x, y, t)
    lap /= h * h
    dt = (w(x, y, t + h) - w(x, y, t - h)) / (2 * h)
    assert abs(dt + lap) > 1e-2


def test_dt_v_matches_fd():
    h = 1e-6
    for x, y in sample_cone_points(EX, 20, seed=9):
        for t in (0.5, 1.0, 1.5):
            fd = (appell_v(EX, x, y, t + h) - appell_v(EX, x, y, t - h)) / (2 * h)
            an = appell_dt_v(EX, x, y, t)
            assert abs(fd - an) <= 1e-5 * max(abs(an), 1e-12)


def test_v_decays_as_t_vanishes():
    for x, y in [(1.0, 0.0), (0.8, 0.3), (2.0, -0.5)]:
        logs = [log_abs_v(EX, x, y, t) for t in (1e-1, 1e-2, 1e-3, 1e-4)]
        assert all(b < a for a, b in zip(logs, logs[1:]))
        assert appell_v(EX, x, y, 1e-4) == 0.0


def test_u_vanishes_at_final_time():
    # sample u(x, t) where x + offset lies in the cone
    for px, py in sample_cone_points(EX, 30, seed=10, r_range=(1.0, 3.0)):
        x, y = px - EX.offset[0], py - EX.offset[1]
        assert abs(appell_u(EX, x, y, 1 - 1e-6)) <= 1e-8


def test_cone_bound_verdicts():
    radii = [1, 10, 100, 1000]
    narrow = cone_bound_scan(EX, 55.0, radii)
    wide = cone_bound_scan(EX, 65.0, radii)
    axis = cone_bound_scan(EX, 0.0, radii, n_psi=1)
    assert narrow.verdict == "bounded"
    assert np.all(np.diff(narrow.log10_sup) <= 0)
    assert wide.verdict == "unbounded"
    assert axis.verdict == "bounded"
    for a in (2.5, 5.0):
        assert cone_bound_scan(EscauriazaExample(a), 0.0, radii, n_psi=1).verdict == "bounded"


def test_cone_bound_growth_location():
    rep = cone_bound_scan(EX, 65.0, [10.0, 100.0])
    j = int(np.argmax(rep.log10_abs[-1]))
    assert abs(abs(rep.psi[j]) - math.radians(32.5)) < 1e-9


def test_report_outputs():
    rep = cone_bound_scan(EX, 55.0, [1, 10])
    header, rows = rep.csv_rows()
    assert header == ["r", "psi_rad", "abs_v"]
    assert len(rows) == 2 * 201
    d = rep.to_dict()
    assert d["verdict"] == "bounded" and len(d["log10_sup_abs_v"]) == 2


def test_errors():
    with pytest.raises(ParameterError):
        EscauriazaExample(2.0)
    with pytest.raises(DomainError):
        appell_v(EX, 1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        appell_u(EX, 0.0, 0.0, 1.0)
    with pytest.raises(BranchError):
        harmonic_h(EscauriazaExample(2.5), -1.0, 0.0)
    with pytest.raises(ParameterError):
        cone_bound_scan(EX, 55.0, [1.0, -2.0])
    with pytest.raises(ParameterError):
        cone_bound_scan(EX, 55.0, [1.0, math.inf])


def test_overflow_is_infinite_not_error():
    assert math.isinf(appell_v(EX, -30.0, 0.0, 1.0))
