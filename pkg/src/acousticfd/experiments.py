"""Benchmark setups and measurements.

Vortex initial data, kernel-adapted (discretely stationary) data built from
a streamfunction, decay-rate fits, conserved-operator extraction, and the
vortex benchmark orchestration.
"""

import json
import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .grid import (AcousticParams, FieldSet, l1_norm_central_diff,
                   write_field_csv)
from .laurent import LaurentPoly, symbol_to_stencil
from .schemes import make_scheme, rhs
from .stencils import ScalarStencil
from .timestep import CFL_NORMALIZATION, StepControl, run


@dataclass(frozen=True)
class VortexParams:
    x0: float = 0.5
    y0: float = 0.5
    r1: float = 0.2
    r2: float = 0.4
    speed: float = 1.0
    p0: float = 1.0

    def __post_init__(self):
        if not (0 < self.r1 < self.r2):
            raise ValueError("need 0 < r1 < r2")


def gresho_vortex(grid, vortex=None, acoustic=None):
    """Piecewise-linear azimuthal velocity profile, constant pressure.

    v_phi rises linearly to `speed` at r1, falls linearly to zero at r2.
    Divergence-free analytically; sampling it at cell centers is only an
    O(dx^2)-accurate discrete stationary state.
    """
    vortex = vortex or VortexParams()
    lx, ly = grid.nx * grid.dx, grid.ny * grid.dy
    margin = min(vortex.x0, lx - vortex.x0, vortex.y0, ly - vortex.y0)
    if vortex.r2 > margin:
        warnings.warn("vortex radius %.3g exceeds distance %.3g to the boundary"
                      % (vortex.r2, margin))
    x, y = grid.cell_centers()
    dx_, dy_ = x - vortex.x0, y - vortex.y0
    r = np.hypot(dx_, dy_)
    # v_phi / r is what multiplies (-dy, dx); finite at r = 0 on the inner branch
    inner = vortex.speed / vortex.r1
    with np.errstate(divide="ignore", invalid="ignore"):
        outer = vortex.speed * (vortex.r2 - r) / ((vortex.r2 - vortex.r1) * r)
    ratio = np.where(r < vortex.r1, inner, np.where(r < vortex.r2, outer, 0.0))
    ratio = np.where(r == 0.0, inner, ratio)
    u = -ratio * dy_
    v = ratio * dx_
    p = np.full_like(u, vortex.p0)
    return FieldSet(grid, u, v, p)


def stream_velocity(psi, div_row, grid, p0=0.0):
    """Velocity field in the exact kernel of div_row, from a streamfunction.

    u = -(B_v psi), v = +(B_u psi) with the full unit-carrying stencils, so
    B_u u + B_v v = (B_v B_u - B_u B_v) psi = 0 exactly by commutation of
    scalar stencils, on any grid including anisotropic ones.
    """
    psi = np.asarray(psi, dtype=float)
    if div_row.bu.compose(div_row.bv) != div_row.bv.compose(div_row.bu):
        raise ValueError("divergence row components do not commute")
    u = -div_row.bv.apply(psi, grid)
    v = div_row.bu.apply(psi, grid)
    p = np.full_like(u, p0)
    return FieldSet(grid, u, v, p)


def stationarity_residual(spec, state):
    """|rhs|_inf normalized by (c/eps)|q|_inf; 0 for the zero state."""
    denom = (spec.params.c / spec.params.eps) * state.norm_inf()
    if denom == 0.0:
        return 0.0
    return rhs(spec, state).norm_inf() / denom


class ConservedOperator:
    """Physical-space left-kernel row: a per-cell functional constant in time.

    wu, wv, wp are whole-cell scalar stencils with units already bound into
    their coefficients; apply returns the conserved density field.
    """

    def __init__(self, grid, wu, wv, wp, symbol_row, exact=True):
        self.grid = grid
        self.wu = wu
        self.wv = wv
        self.wp = wp
        self.symbol_row = symbol_row
        self.exact = exact

    def apply(self, field):
        out = self.wu.apply(field.u, self.grid) + self.wv.apply(field.v, self.grid)
        if not self.wp.is_zero():
            out = out + self.wp.apply(field.p, self.grid)
        return out

    def weight_norm(self):
        total = 0.0
        for st in (self.wu, self.wv, self.wp):
            total += sum(abs(w) for w in st.weights(self.grid).values())
        return total

    def to_json_dict(self):
        return {"wu": self.wu.to_json_dict(), "wv": self.wv.to_json_dict(),
                "wp": self.wp.to_json_dict(), "exact": self.exact}


def _cross_row(cols, i, j):
    """Cross product of 3-vector polynomial columns i and j: a left-kernel candidate."""
    a, b = cols[i], cols[j]
    return [a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]]


def extract_conserved_operator(spec, check_states=3, seed=11, tol=1e-11):
    """Left kernel row of the exact symbol, cleared to a Laurent-polynomial
    stencil row and verified both exactly (w M = 0) and on random data."""
    m = spec.stencil.exact_symbol()
    velocity_block_zero = all(m[r][c].is_zero() for r in (0, 1) for c in (0, 1))
    if velocity_block_zero:
        w = [m[1][2], -m[0][2], LaurentPoly.zero()]
    else:
        cols = [[m[r][c] for r in range(3)] for c in range(3)]
        w = None
        for i, j in ((0, 2), (1, 2), (0, 1)):
            cand = _cross_row(cols, i, j)
            if not all(p.is_zero() for p in cand):
                w = cand
                break
        if w is None:
            raise ValueError("cannot extract a left kernel row: symbol columns all parallel-degenerate")

    # clear the common monomial shift and rational content
    nonzero = [p for p in w if not p.is_zero()]
    mins = [p.min_exponents() for p in nonzero]
    da = -min(e[0] for e in mins)
    db = -min(e[1] for e in mins)
    w = [p if p.is_zero() else p.shifted(da, db, 0, 0) for p in w]
    contents = [p.content() for p in w if not p.is_zero()]
    num, den = 0, 1
    for c in contents:
        num = math.gcd(num, c.numerator)
        den = den * c.denominator // math.gcd(den, c.denominator)
    g = Fraction(num, den)
    w = [p * (1 / g) for p in w]
    lead = next(p for p in w if not p.is_zero())
    if lead.terms[max(lead.terms)] < 0:
        w = [-p for p in w]

    for c in range(3):
        acc = w[0] * m[0][c] + w[1] * m[1][c] + w[2] * m[2][c]
        if not acc.is_zero():
            raise RuntimeError("left kernel verification failed on column %d" % c)

    stencils = []
    for p in w:
        stencils.append(symbol_to_stencil(p) if not p.is_zero() else ScalarStencil({}))
    op = ConservedOperator(spec.grid, stencils[0], stencils[1], stencils[2], w)

    rng = np.random.default_rng(seed)
    scale = op.weight_norm() * (spec.params.c / spec.params.eps)
    for _ in range(check_states):
        state = FieldSet.from_q(spec.grid, rng.standard_normal((3, spec.grid.nx, spec.grid.ny)))
        drift = np.max(np.abs(op.apply(rhs(spec, state))))
        if drift > tol * scale * state.norm_inf():
            raise RuntimeError("conserved operator fails numerically: %.3g" % drift)
    return op


@dataclass(frozen=True)
class DecayFit:
    rate: float
    intercept: float
    t_a: float
    t_b: float
    residual: float
    n_points: int


def decay_window(times, values, params, grid, floor=1e-14):
    """Fit window skipping the initial transient; ends at the series end or
    the first sample below the floor."""
    t_a = 5.0 * grid.min_spacing * params.eps / params.c
    t_b = times[-1]
    for t, v in zip(times, values):
        if t > t_a and v < floor:
            t_b = t
            break
    return t_a, t_b


def fit_decay(times, values, window):
    """Least squares on log(value): value ~ exp(intercept - rate * t)."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    t_a, t_b = window
    mask = (times >= t_a) & (times <= t_b)
    if mask.sum() < 2:
        raise ValueError("fit window [%g, %g] holds %d samples, need 2" % (t_a, t_b, mask.sum()))
    sel_t, sel_v = times[mask], values[mask]
    if np.any(sel_v <= 0):
        raise ValueError("non-positive values in fit window")
    logv = np.log(sel_v)
    slope, intercept = np.polyfit(sel_t, logv, 1)
    resid = float(np.sqrt(np.mean((logv - (slope * sel_t + intercept)) ** 2)))
    return DecayFit(rate=float(-slope), intercept=float(intercept),
                    t_a=float(sel_t[0]), t_b=float(sel_t[-1]),
                    residual=resid, n_points=int(mask.sum()))


def write_timeseries_csv(path, times, values, metadata=None):
    with open(path, "w") as fh:
        fh.write("t,value\n")
        for t, v in zip(times, values):
            fh.write("%.17g,%.17g\n" % (t, v))
    if metadata is not None:
        with open(str(path) + ".meta.json", "w") as fh:
            json.dump(metadata, fh, indent=1, sort_keys=True)
            fh.write("\n")


def read_timeseries_csv(path):
    times, values = [], []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "t,value":
            raise ValueError("unexpected series header: %r" % header)
        for line in fh:
            a, b = line.split(",")
            times.append(float(a))
            values.append(float(b))
    return np.array(times), np.array(values)


def _benchmark_probes(grid):
    return {"dux_l1": lambda s: l1_norm_central_diff(s.u, 0, grid),
            "duy_l1": lambda s: l1_norm_central_diff(s.u, 1, grid)}


def vortex_benchmark(scheme_name, eps_list, grid, t_end, c=1.0, cfl=0.45,
                     vortex=None, out_dir=None, scheme_kwargs=None, fit=True):
    """Vortex runs across eps: probe series, decay fits, final fields.

    t_end may be a number (same horizon for all eps) or a callable eps -> t.
    Returns a report dict; writes CSV/JSON artifacts when out_dir is given.
    """
    vortex = vortex or VortexParams()
    scheme_kwargs = scheme_kwargs or {}
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
    report = {"scheme": scheme_name, "grid": [grid.nx, grid.ny],
              "cfl": cfl, "normalization": CFL_NORMALIZATION, "runs": []}
    for eps in eps_list:
        params = AcousticParams(c=c, eps=eps)
        spec = make_scheme(scheme_name, params, grid, **scheme_kwargs)
        state0 = gresho_vortex(grid, vortex, params)
        horizon = t_end(eps) if callable(t_end) else t_end
        control = StepControl(cfl=cfl, t_end=float(horizon))
        result = run(spec, state0, control, probes=_benchmark_probes(grid))
        entry = {"eps": eps, "t_end": float(horizon), "n_steps": result.n_steps,
                 "dt": result.dt,
                 "initial_dux_l1": float(result.series["dux_l1"][0]),
                 "final_dux_l1": float(result.series["dux_l1"][-1]),
                 "initial_duy_l1": float(result.series["duy_l1"][0]),
                 "final_duy_l1": float(result.series["duy_l1"][-1])}
        entry["dux_retention"] = entry["final_dux_l1"] / entry["initial_dux_l1"]
        if fit:
            window = decay_window(result.times, result.series["dux_l1"], params, grid)
            try:
                decay = fit_decay(result.times, result.series["dux_l1"], window)
                entry["lambda_fit"] = decay.rate
                entry["fit"] = {"rate": decay.rate, "intercept": decay.intercept,
                                "t_a": decay.t_a, "t_b": decay.t_b,
                                "residual": decay.residual, "n_points": decay.n_points}
            except ValueError as err:
                entry["lambda_fit"] = None
                entry["fit_error"] = str(err)
        if out_dir is not None:
            tag = "%s_eps%s" % (scheme_name, ("%g" % eps).replace(".", "p").replace("-", "m"))
            meta = {"scheme": scheme_name, "eps": eps, "c": c,
                    "grid": [grid.nx, grid.ny], "cfl": cfl,
                    "t_end": float(horizon), "normalization": CFL_NORMALIZATION}
            files = {}
            for probe in ("dux_l1", "duy_l1"):
                base = "%s_%s.csv" % (tag, probe)
                write_timeseries_csv(os.path.join(out_dir, base), result.times,
                                     result.series[probe], dict(meta, probe=probe))
                files[probe] = base
            fbase = "%s_final.csv" % tag
            ffield = os.path.join(out_dir, fbase)
            write_field_csv(ffield, result.final_state)
            with open(ffield + ".meta.json", "w") as fh:
                json.dump(dict(meta, kind="final_field"), fh, indent=1, sort_keys=True)
                fh.write("\n")
            files["final_field"] = fbase
            entry["files"] = files
        report["runs"].append(entry)
    if out_dir is not None:
        sbase = "%s_summary.json" % scheme_name
        with open(os.path.join(out_dir, sbase), "w") as fh:
            json.dump(report, fh, indent=1, sort_keys=True)
            fh.write("\n")
        report["summary_file"] = sbase
    return report


def divergence_observed_order(row_factory, sizes=(16, 32, 64, 128)):
    """Convergence order of a divergence row against a smooth analytic field.

    row_factory() -> VecStencilRow (units carried, so the same row works on
    every grid). Returns the log-log slope across the size ladder.
    """
    from .grid import GridSpec
    errs, hs = [], []
    for n in sizes:
        grid = GridSpec.unit_square(n)
        x, y = grid.cell_centers()
        u = np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y)
        v = np.cos(4 * np.pi * x) * np.sin(2 * np.pi * y)
        div = (2 * np.pi * np.cos(2 * np.pi * x) * np.cos(2 * np.pi * y)
               + 2 * np.pi * np.cos(4 * np.pi * x) * np.cos(2 * np.pi * y))
        approx = row_factory().apply(u, v, grid)
        errs.append(np.max(np.abs(approx - div)))
        hs.append(grid.dx)
    slope, _ = np.polyfit(np.log(hs), np.log(errs), 1)
    return float(slope)


def kernel_adapted_state(spec, seed=3, amplitude=1.0, p0=1.0, dyadic=False):
    """Random streamfunction data lying in the scheme's discrete kernel."""
    grid = spec.grid
    rng = np.random.default_rng(seed)
    if dyadic:
        psi = rng.integers(-(1 << 20), 1 << 20, size=(grid.nx, grid.ny)) / float(1 << 20)
        psi = psi * amplitude
    else:
        psi = amplitude * rng.standard_normal((grid.nx, grid.ny))
    return stream_velocity(psi, spec.divergence_row(), grid, p0=p0)
