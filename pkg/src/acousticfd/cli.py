"""Command line front end.

Commands: analyze | certify | simulate | sweep | catalog.
Exit codes: 0 pass, 1 certification/verdict failure, 2 usage error,
3 instability during a simulation.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .fourier import det_scan, eigenvalue_scaling_check, generic_phases
from .grid import AcousticParams, GridSpec
from .laurent import (consistency_nullspace, moore_symmetry_scan,
                      operator_identity_check, spans_match)
from .schemes import CATALOG_NAMES, SP_NAMES, make_scheme
from .stencils import (averaged_div, central_div, consistent_diffusion,
                       rational_string)
from .timestep import CFL_NORMALIZATION, InstabilityError, cfl_sweep
from .experiments import (VortexParams, gresho_vortex, vortex_benchmark,
                          extract_conserved_operator)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNSTABLE = 3

# keys a flat JSON config may set; identical to the flag dest names
CONFIG_KEYS = ("scheme", "a1", "a2", "a3", "a4", "c1", "c2", "eps", "c",
               "grid", "dx", "dy", "cfl", "t_end", "k_samples", "seed",
               "out", "jobs", "divergence", "radius", "identity_only",
               "cfl_sweep")

DEFAULTS = {"eps": 1.0, "c": 1.0, "grid": "50", "cfl": 0.45, "t_end": 0.3,
            "k_samples": 200, "seed": 0, "jobs": 1,
            "a1": 0.0, "a2": 0.0, "a3": 0.0, "a4": 0.0, "c1": None, "c2": None,
            "divergence": "both", "radius": 1, "identity_only": False,
            "cfl_sweep": False, "out": None, "dx": None, "dy": None,
            "scheme": None}


def _add_common(p):
    p.add_argument("--config", default=None, help="flat JSON config; flags win")
    p.add_argument("--scheme", default=None)
    p.add_argument("--a1", type=float, default=None)
    p.add_argument("--a2", type=float, default=None)
    p.add_argument("--a3", type=float, default=None)
    p.add_argument("--a4", type=float, default=None)
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--c2", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--grid", default=None, metavar="NX[,NY]")
    p.add_argument("--dx", type=float, default=None)
    p.add_argument("--dy", type=float, default=None)
    p.add_argument("--cfl", type=float, default=None)
    p.add_argument("--t-end", dest="t_end", type=float, default=None)
    p.add_argument("--k-samples", dest="k_samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, metavar="DIR")
    p.add_argument("--jobs", type=int, default=None)


def build_parser():
    ap = argparse.ArgumentParser(prog="acousticfd",
                                 description="semi-discrete acoustic schemes: "
                                             "kernel analysis, exact certification, vortex runs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="kernel-dimension verdict for one scheme")
    _add_common(p)

    p = sub.add_parser("certify", help="exact rational certificates for divergence operators")
    _add_common(p)
    p.add_argument("--divergence", choices=("central", "averaged", "both"), default=None)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--identity-only", dest="identity_only", action="store_true", default=None)

    p = sub.add_parser("simulate", help="vortex run: series, decay fit, final field")
    _add_common(p)
    p.add_argument("--cfl-sweep", dest="cfl_sweep", action="store_true", default=None)

    p = sub.add_parser("sweep", help="max stable CFL scan on vortex data")
    _add_common(p)

    p = sub.add_parser("catalog", help="list built-in schemes and their claims")
    _add_common(p)
    return ap


def merge_config(args):
    """Flag values win over config file values win over defaults."""
    cfg = dict(DEFAULTS)
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path) as fh:
                loaded = json.load(fh)
        except (OSError, ValueError) as err:
            raise UsageError("cannot read config %s: %s" % (path, err))
        if not isinstance(loaded, dict):
            raise UsageError("config must be a flat JSON object")
        unknown = sorted(set(loaded) - set(CONFIG_KEYS))
        if unknown:
            raise UsageError("unknown config keys: %s" % ", ".join(unknown))
        cfg.update(loaded)
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


class UsageError(Exception):
    pass


def parse_grid(cfg):
    spec = str(cfg["grid"])
    parts = spec.split(",")
    try:
        nx = int(parts[0])
        ny = int(parts[1]) if len(parts) > 1 else nx
    except ValueError:
        raise UsageError("bad --grid %r, want NX or NX,NY" % spec)
    dx = cfg["dx"] if cfg["dx"] is not None else 1.0 / nx
    dy = cfg["dy"] if cfg["dy"] is not None else 1.0 / ny
    return GridSpec(nx=nx, ny=ny, dx=dx, dy=dy)


def build_scheme(cfg, grid, params):
    name = cfg["scheme"]
    if name is None:
        raise UsageError("--scheme is required")
    kwargs = {}
    if name == "dimsplit":
        kwargs = {"a1": cfg["a1"], "a2": cfg["a2"], "a3": cfg["a3"], "a4": cfg["a4"]}
    try:
        return make_scheme(name, params, grid, **kwargs)
    except KeyError:
        raise UsageError("unknown scheme %r (catalog: %s, dimsplit)"
                         % (name, ", ".join(CATALOG_NAMES)))


def emit_json(doc, cfg, name):
    text = json.dumps(doc, indent=1, sort_keys=True, default=str) + "\n"
    if cfg["out"]:
        os.makedirs(cfg["out"], exist_ok=True)
        path = os.path.join(cfg["out"], name)
        with open(path, "w") as fh:
            fh.write(text)
        print(path)
    else:
        sys.stdout.write(text)


def _scheme_kwargs(cfg):
    if cfg["scheme"] == "dimsplit":
        return {"a1": cfg["a1"], "a2": cfg["a2"], "a3": cfg["a3"], "a4": cfg["a4"]}
    return {}


def cmd_analyze(cfg):
    grid = parse_grid(cfg)
    params = AcousticParams(c=cfg["c"], eps=cfg["eps"])
    spec = build_scheme(cfg, grid, params)
    expected = spec.claims.get("stationarity_preserving")
    verdict = det_scan(spec.stencil, grid, params,
                       phases=generic_phases(int(cfg["k_samples"])),
                       scheme_name=spec.name, expected=expected)
    doc = verdict.to_json_dict()
    doc["config"] = {k: cfg[k] for k in ("scheme", "eps", "c", "grid", "k_samples", "seed")}

    kwargs = _scheme_kwargs(cfg)

    def factory(c, eps):
        return make_scheme(cfg["scheme"], AcousticParams(c=c, eps=eps), grid, **kwargs)

    scaling = eigenvalue_scaling_check(factory, grid)
    doc["eigenvalue_scaling"] = scaling

    if verdict.is_stationarity_preserving:
        doc["divergence_row"] = spec.divergence_row().to_json_dict()
        try:
            op = extract_conserved_operator(spec)
            doc["conserved_operator"] = op.to_json_dict()
        except (ValueError, RuntimeError) as err:
            doc["conserved_operator_error"] = str(err)

    emit_json(doc, cfg, "analyze_%s.json" % spec.name)
    # scaling is reported but only the claim comparison decides the exit code:
    # user-supplied diffusion coefficients are fixed numbers with no c/eps law
    ok = (expected is None or verdict.is_stationarity_preserving == expected)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_certify(cfg):
    report = {}
    failures = []

    ident = operator_identity_check()
    report["operator_identities"] = ident
    if not ident["ok"]:
        failures.append("operator identity: %r" % ident)

    if not cfg["identity_only"]:
        radius = int(cfg["radius"])
        which = cfg["divergence"]
        if which in ("central", "both"):
            basis = consistency_nullspace(central_div(), radius=radius)
            report["central_nullspace_dim"] = len(basis)
            if len(basis) != 0:
                failures.append("central divergence admits a consistent diffusion: dim %d"
                                % len(basis))
                report["central_nullspace"] = [r.to_json_dict() for r in basis]
        if which in ("averaged", "both"):
            basis = consistency_nullspace(averaged_div(), radius=radius)
            report["averaged_nullspace_dim"] = len(basis)
            report["averaged_nullspace"] = [r.to_json_dict() for r in basis]
            expected = [consistent_diffusion(1, 0), consistent_diffusion(0, 1)]
            matches = len(basis) == 2 and spans_match(basis, expected, radius=radius)
            report["averaged_basis_matches_consistent_diffusion"] = matches
            if not matches:
                failures.append("averaged-divergence nullspace does not match the "
                                "consistent diffusion pair")
        if which == "both":
            scan = moore_symmetry_scan()
            report["symmetry_scan"] = [{"gamma": rational_string(r["gamma"]),
                                        "beta": rational_string(r["beta"]),
                                        "dim": r["dim"],
                                        "is_averaged": r["is_averaged"]} for r in scan]
            bad = [r for r in scan if (r["dim"] > 0) != r["is_averaged"]]
            if bad:
                failures.append("nullspace dimension positive off the averaged ray: %r"
                                % [(str(r["gamma"]), r["dim"]) for r in bad])

    report["failures"] = failures
    report["certified"] = not failures
    emit_json(report, cfg, "certify.json")
    if failures:
        for f in failures:
            print("FAIL:", f, file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_simulate(cfg):
    if cfg["cfl_sweep"]:
        return cmd_sweep(cfg)
    grid = parse_grid(cfg)
    try:
        report = vortex_benchmark(cfg["scheme"], [float(cfg["eps"])], grid,
                                  float(cfg["t_end"]), c=float(cfg["c"]),
                                  cfl=float(cfg["cfl"]),
                                  out_dir=cfg["out"],
                                  scheme_kwargs=_scheme_kwargs(cfg))
    except KeyError:
        raise UsageError("unknown scheme %r" % cfg["scheme"])
    except InstabilityError as err:
        doc = {"error": "instability", "step": err.step,
               "last_stable_time": err.t, "scheme": cfg["scheme"],
               "cfl": cfg["cfl"], "eps": cfg["eps"]}
        emit_json(doc, cfg, "simulate_failed.json")
        return EXIT_UNSTABLE
    emit_json(report, cfg, "simulate_%s.json" % cfg["scheme"])
    return EXIT_OK


def cmd_sweep(cfg):
    grid = parse_grid(cfg)
    params = AcousticParams(c=cfg["c"], eps=cfg["eps"])
    spec = build_scheme(cfg, grid, params)
    state0 = gresho_vortex(grid, VortexParams(), params)
    cfl_grid = [round(0.05 * k, 2) for k in range(1, 33)]
    jobs = max(1, int(cfg["jobs"]))
    if jobs == 1:
        result = cfl_sweep(spec, state0, cfl_grid)
    else:
        # each cfl point is independent; farm them out and reassemble
        def one(cfl):
            return cfl_sweep(spec, state0.copy(), [cfl])["results"][0]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(one, cfl_grid))
        passing = [p["cfl"] for p in points if p["stable"]]
        result = {"max_stable_cfl": max(passing) if passing else None,
                  "horizon_steps": 500, "growth_factor": 2.0,
                  "initial_norm": state0.norm_inf(),
                  "normalization": CFL_NORMALIZATION, "results": points}
    result["scheme"] = spec.name
    result["eps"] = cfg["eps"]
    result["grid"] = [grid.nx, grid.ny]
    emit_json(result, cfg, "sweep_%s.json" % spec.name)
    return EXIT_OK


def cmd_catalog(cfg):
    grid = parse_grid(cfg)
    params = AcousticParams(c=cfg["c"], eps=cfg["eps"])
    doc = {"schemes": [], "normalization": CFL_NORMALIZATION}
    for name in CATALOG_NAMES:
        spec = make_scheme(name, params, grid)
        entry = {"name": name, "family": spec.family,
                 "claims": {k: v for k, v in spec.claims.items()},
                 "stationarity_preserving_expected": name in SP_NAMES}
        dp = spec.extra.get("diffusion")
        if dp is not None:
            entry["diffusion"] = {"a1": rational_string(dp.a1), "a2": rational_string(dp.a2),
                                  "a3": rational_string(dp.a3), "a4": rational_string(dp.a4)}
        doc["schemes"].append(entry)
    emit_json(doc, cfg, "catalog.json")
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "certify": cmd_certify,
            "simulate": cmd_simulate, "sweep": cmd_sweep,
            "catalog": cmd_catalog}


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = merge_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as err:
        print("error:", err, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
