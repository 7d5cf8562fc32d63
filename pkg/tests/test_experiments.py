"""Vortex data, kernel-adapted data, decay fits, conserved functionals."""

import json
import os
from fractions import Fraction

import numpy as np
import pytest

from acousticfd.experiments import (
    VortexParams,
    decay_window,
    divergence_observed_order,
    extract_conserved_operator,
    fit_decay,
    gresho_vortex,
    kernel_adapted_state,
    read_timeseries_csv,
    stationarity_residual,
    stream_velocity,
    vortex_benchmark,
    write_timeseries_csv,
)
from acousticfd.grid import AcousticParams, FieldSet, GridSpec
from acousticfd.schemes import SP_NAMES, make_scheme
from acousticfd.stencils import (
    averaged_div,
    central_curl,
    central_div,
    dimsplit_div,
    dimsplit_vorticity,
)


def _continuous_vortex_velocity(xx, yy, vp):
    dx_, dy_ = xx - vp.x0, yy - vp.y0
    r = np.hypot(dx_, dy_)
    inner = vp.speed / vp.r1
    with np.errstate(divide="ignore", invalid="ignore"):
        outer = vp.speed * (vp.r2 - r) / ((vp.r2 - vp.r1) * r)
    ratio = np.where(r < vp.r1, inner, np.where(r < vp.r2, outer, 0.0))
    ratio = np.where(r == 0.0, inner, ratio)
    return -ratio * dy_, ratio * dx_


def test_vortex_params_validation():
    with pytest.raises(ValueError):
        VortexParams(r1=0.4, r2=0.2)
    with pytest.raises(ValueError):
        VortexParams(r1=0.0)


def test_vortex_far_field_and_peak():
    grid = GridSpec.unit_square(50)
    state = gresho_vortex(grid)
    # corners lie outside r2: quiescent with background pressure
    for i, j in ((0, 0), (0, 49), (49, 0), (49, 49)):
        assert state.u[i, j] == 0.0 and state.v[i, j] == 0.0
        assert state.p[i, j] == 1.0
    speed = np.hypot(state.u, state.v)
    assert np.max(speed) == pytest.approx(1.0, abs=0.05)
    assert np.all(state.p == 1.0)


def test_vortex_analytically_divergence_free():
    vp = VortexParams()
    rng = np.random.default_rng(8)
    h = 1e-6
    checked = 0
    for _ in range(200):
        x, y = rng.uniform(0.05, 0.95, size=2)
        r = np.hypot(x - vp.x0, y - vp.y0)
        # skip the profile kinks where one-sided derivatives differ
        if min(abs(r - vp.r1), abs(r - vp.r2), r) < 0.01:
            continue
        up, _ = _continuous_vortex_velocity(np.array(x + h), np.array(y), vp)
        um, _ = _continuous_vortex_velocity(np.array(x - h), np.array(y), vp)
        _, vp_ = _continuous_vortex_velocity(np.array(x), np.array(y + h), vp)
        _, vm = _continuous_vortex_velocity(np.array(x), np.array(y - h), vp)
        div = (up - um) / (2 * h) + (vp_ - vm) / (2 * h)
        assert abs(div) < 1e-4
        checked += 1
    assert checked > 100


def test_sampled_vortex_not_discretely_stationary():
    grid = GridSpec.unit_square(50)
    state = gresho_vortex(grid)
    resid = np.max(np.abs(central_div().apply(state.u, state.v, grid)))
    # small (the profile is divergence free) but far from machine zero
    assert 1e-10 < resid < 1.0


def test_vortex_boundary_warning():
    grid = GridSpec.unit_square(20)
    with pytest.warns(UserWarning):
        gresho_vortex(grid, VortexParams(x0=0.2))


def test_stream_velocity_exact_kernel_membership():
    rng = np.random.default_rng(4)
    rows = [averaged_div(), central_div(), dimsplit_div(Fraction(-1, 3), 2)]
    grids = [GridSpec.unit_square(7), GridSpec(12, 10, 0.05, 0.07),
             GridSpec(9, 16, 0.25, 0.01)]
    for grid in grids:
        psi = rng.standard_normal((grid.nx, grid.ny))
        for row in rows:
            state = stream_velocity(psi, row, grid, p0=2.0)
            res = row.apply(state.u, state.v, grid)
            scale = np.max(np.abs(psi)) / (grid.dx * grid.dy)
            assert np.max(np.abs(res)) <= 1e-13 * scale
            assert np.all(state.p == 2.0)


def test_stream_velocity_constant_psi_is_quiescent(square_grid):
    state = stream_velocity(np.ones((16, 16)), averaged_div(), square_grid, p0=0.5)
    assert np.all(state.u == 0.0) and np.all(state.v == 0.0)
    assert np.all(state.p == 0.5)


def test_stationarity_residual_split(square_grid, params):
    for name in SP_NAMES:
        spec = make_scheme(name, params, square_grid)
        state = kernel_adapted_state(spec, seed=3)
        assert stationarity_residual(spec, state) <= 1e-12
    roe = make_scheme("roe", params, square_grid)
    assert stationarity_residual(roe, kernel_adapted_state(roe, seed=3)) >= 1e-3
    assert stationarity_residual(roe, FieldSet.zeros(square_grid)) == 0.0


def test_kernel_adapted_dyadic_state(square_grid, params):
    spec = make_scheme("lowmach1", params, square_grid)
    state = kernel_adapted_state(spec, seed=5, dyadic=True)
    assert state.all_finite()
    assert np.all(state.p == 1.0)
    # dyadic streamfunction keeps every weight application exact in binary
    assert np.max(np.abs(state.u)) > 0.0


def test_extracted_operator_central_is_curl(square_grid, params):
    op = extract_conserved_operator(make_scheme("central", params, square_grid))
    assert op.symbol_row[2].is_zero()
    assert op.wp.is_zero()
    curl = central_curl().to_symbol()
    cu = curl.pu.substitute_spacings(square_grid.dx_exact, square_grid.dy_exact)
    cv = curl.pv.substitute_spacings(square_grid.dx_exact, square_grid.dy_exact)
    assert (op.symbol_row[0] * cv - op.symbol_row[1] * cu).is_zero()
    assert not op.symbol_row[0].is_zero()


def test_extracted_operator_dimsplit_subfamily(square_grid):
    # a3 = c^2 eps^2 a2 makes the conserved row the adapted vorticity
    params = AcousticParams(c=1.0, eps=1.0)
    spec = make_scheme("dimsplit", params, square_grid,
                       a1=0, a2=0.25, a3=0.25, a4=0.7)
    op = extract_conserved_operator(spec)
    vort = dimsplit_vorticity(Fraction(1, 4), 1).to_symbol()
    vu = vort.pu.substitute_spacings(square_grid.dx_exact, square_grid.dy_exact)
    vv = vort.pv.substitute_spacings(square_grid.dx_exact, square_grid.dy_exact)
    assert op.symbol_row[2].is_zero()
    assert (op.symbol_row[0] * vv - op.symbol_row[1] * vu).is_zero()


def test_extracted_operator_multid_pressure_weight(square_grid, aniso_grid, params):
    sq = extract_conserved_operator(make_scheme("multid", params, square_grid))
    assert sq.symbol_row[2].is_zero()
    an = extract_conserved_operator(make_scheme("multid", params, aniso_grid))
    # unequal spacings leave a genuine pressure contribution in the functional
    assert not an.symbol_row[2].is_zero()
    doc = an.to_json_dict()
    assert doc["exact"] is True
    assert doc["wp"]["entries"]


def test_conserved_operator_annihilates_rhs(square_grid, params, rng):
    from acousticfd.schemes import rhs

    spec = make_scheme("multid", params, square_grid)
    op = extract_conserved_operator(spec)
    scale = op.weight_norm() * (params.c / params.eps)
    for _ in range(5):
        state = FieldSet.from_q(square_grid, rng.standard_normal((3, 16, 16)))
        drift = np.max(np.abs(op.apply(rhs(spec, state))))
        assert drift <= 1e-12 * scale * state.norm_inf()


def test_fit_decay_recovers_rate():
    t = np.linspace(0.0, 2.0, 121)
    v = np.exp(-3.0 * t) * 7.0
    fit = fit_decay(t, v, (0.1, 2.0))
    assert fit.rate == pytest.approx(3.0, abs=1e-10)
    assert fit.residual < 1e-12
    assert fit.n_points == np.sum((t >= 0.1) & (t <= 2.0))
    # positive rescaling shifts the intercept only
    fit5 = fit_decay(t, 5.0 * v, (0.1, 2.0))
    assert fit5.rate == pytest.approx(fit.rate, abs=1e-12)
    with pytest.raises(ValueError):
        fit_decay(t, v - 1.0, (0.1, 2.0))
    with pytest.raises(ValueError):
        fit_decay(t, v, (1.99, 1.995))


def test_decay_window(square_grid):
    params = AcousticParams(c=2.0, eps=0.5)
    times = np.linspace(0.0, 1.0, 101)
    values = np.exp(-40.0 * times)
    t_a, t_b = decay_window(times, values, params, square_grid, floor=1e-14)
    assert t_a == pytest.approx(5 * square_grid.min_spacing * 0.5 / 2.0)
    assert t_b == times[np.argmax((times > t_a) & (values < 1e-14))]
    flat = np.ones_like(times)
    _, t_b2 = decay_window(times, flat, params, square_grid)
    assert t_b2 == times[-1]


def test_timeseries_roundtrip(tmp_path):
    path = os.path.join(tmp_path, "series.csv")
    t = np.array([0.0, 0.125, 0.25])
    v = np.array([1.0, 0.5, 1.0 / 3.0])
    write_timeseries_csv(path, t, v, metadata={"probe": "dux_l1", "eps": 0.1})
    rt, rv = read_timeseries_csv(path)
    assert np.array_equal(rt, t) and np.array_equal(rv, v)
    with open(path + ".meta.json") as fh:
        meta = json.load(fh)
    assert meta == {"probe": "dux_l1", "eps": 0.1}
    bad = os.path.join(tmp_path, "bad.csv")
    with open(bad, "w") as fh:
        fh.write("time;val\n")
    with pytest.raises(ValueError):
        read_timeseries_csv(bad)


def test_divergence_observed_order_quick():
    second = divergence_observed_order(averaged_div, sizes=(16, 32))
    assert 1.7 <= second <= 2.2
    first = divergence_observed_order(
        lambda: dimsplit_div(Fraction(1, 2), Fraction(1)), sizes=(16, 32))
    assert 0.8 <= first <= 1.2


def test_vortex_benchmark_report(tmp_path):
    grid = GridSpec.unit_square(24)
    report = vortex_benchmark("roe", [0.5], grid, t_end=lambda eps: 0.1 * eps,
                              cfl=0.45, out_dir=str(tmp_path))
    assert report["scheme"] == "roe"
    assert report["grid"] == [24, 24]
    run0 = report["runs"][0]
    assert run0["eps"] == 0.5
    assert run0["n_steps"] >= 1
    assert 0.0 < run0["dux_retention"] <= 1.0
    files = run0["files"]
    # artifacts are recorded by basename so reports are location independent
    for key in ("dux_l1", "duy_l1", "final_field"):
        assert os.sep not in files[key]
        assert os.path.exists(os.path.join(tmp_path, files[key]))
    assert os.path.exists(os.path.join(tmp_path, files["final_field"] + ".meta.json"))
    summary = os.path.join(tmp_path, report["summary_file"])
    with open(summary) as fh:
        doc = json.load(fh)
    assert doc["runs"][0]["eps"] == 0.5
    t, v = read_timeseries_csv(os.path.join(tmp_path, files["dux_l1"]))
    assert t[0] == 0.0 and len(t) == len(v) >= 2
    assert v[0] == pytest.approx(run0["initial_dux_l1"])
