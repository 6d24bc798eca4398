"""Command-line front end.

    python -m esdg vortex2d --N 2 --family gauss --mesh 16x8 --tfinal 5
    python -m esdg cost-model --N 1..7
    python -m esdg operator-check --N 1..15 --families both

Exit codes: 0 success, 1 configuration error, 2 runtime failure,
3 operator property-suite failure.
"""

import argparse
import logging
import os
import sys
import time
from dataclasses import replace

from . import experiments as ex
from .euler import AdmissibilityError
from .geometry import GeometryError
from .operators_1d import ConfigurationError
from .timestepping import IntegrationError

log = logging.getLogger("esdg")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_PROPERTY = 0, 1, 2, 3

# tolerance for the operator property suite
OPERATOR_TOL = 1e-13


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def parse_int_list(text):
    """'3' -> [3]; '1..7' -> [1..7]; '1,3,5' -> [1, 3, 5]."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ConfigurationError(f"empty integer list {text!r}")
    return out


def parse_families(text):
    text = str(text).lower()
    if text in ("both", "all"):
        return ["gauss", "gll"]
    return [f.strip() for f in text.split(",")]


def read_config_file(path):
    """Plain ``key = value`` lines; '#' starts a comment."""
    mapping = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigurationError(f"{path}:{lineno}: expected key = value")
                key, value = line.split("=", 1)
                mapping[key.strip()] = value.strip()
    except OSError as err:
        raise ConfigurationError(f"cannot read config file: {err}") from None
    return mapping


def build_parser():
    p = _Parser(prog="esdg", description="Entropy stable Gauss/GLL collocation DG for compressible Euler")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="key = value file; flags override it")
        sp.add_argument("--output", help="output directory")
        sp.add_argument("-v", "--verbose", action="store_true", help="log progress")

    def run_flags(sp):
        common(sp)
        sp.add_argument("--preset", help="named preset (e.g. tgv-full)")
        sp.add_argument("--N", type=int)
        sp.add_argument("--family")
        sp.add_argument("--mesh", help="elements per direction, e.g. 16x8")
        sp.add_argument("--warp", help="none, light, moderate, heavy or a custom alpha")
        sp.add_argument("--ngeo", choices=["isoparametric", "subparametric"])
        sp.add_argument("--flux", help="ec, lax-friedrichs or matrix")
        sp.add_argument("--cfl", type=float)
        sp.add_argument("--tfinal", type=float)
        sp.add_argument("--output-interval", type=float)
        sp.add_argument("--geometry", choices=["auto", "direct", "curl"])
        sp.add_argument("--fixed-dt", action="store_true", default=None)
        sp.add_argument("--seed", type=int)

    for name in ("vortex2d", "vortex3d", "shockvortex", "tgv"):
        run_flags(sub.add_parser(name))

    sp = sub.add_parser("derivative-demo")
    common(sp)
    sp.add_argument("--N", default="1..15")
    sp.add_argument("--family", default="gauss")

    sp = sub.add_parser("operator-check")
    common(sp)
    sp.add_argument("--N", default="1..15")
    sp.add_argument("--families", default="both")

    sp = sub.add_parser("cost-model")
    common(sp)
    sp.add_argument("--N", default="1..7")
    return p


def resolve_run_config(args):
    name = args.preset or args.command
    if name == "tgv-full" and args.command != "tgv":
        raise ConfigurationError("preset tgv-full belongs to the tgv experiment")
    if name not in ex.PRESETS:
        raise ConfigurationError(f"unknown preset {name!r}")
    cfg = ex.preset(name)
    if args.config:
        cfg = ex.config_from_mapping(read_config_file(args.config), cfg)
    flags = {
        "N": args.N, "family": args.family, "warp": args.warp, "ngeo": args.ngeo, "flux": args.flux,
        "cfl": args.cfl, "t_final": args.tfinal, "output_interval": args.output_interval,
        "geometry": args.geometry, "fixed_dt": args.fixed_dt, "seed": args.seed, "output": args.output,
    }
    if args.mesh:
        flags["mesh"] = ex.parse_mesh(args.mesh)
    cfg = replace(cfg, **{k: v for k, v in flags.items() if v is not None})
    cfg = replace(cfg, experiment=args.command)
    return cfg.validate()


def _outdir(args, cfg=None):
    out = (cfg.output if cfg is not None else None) or args.output or "."
    os.makedirs(out, exist_ok=True)
    return out


def cmd_run(args):
    cfg = resolve_run_config(args)
    out = _outdir(args, cfg)
    ts_path = os.path.join(out, "timeseries.csv")
    if os.path.exists(ts_path):
        os.remove(ts_path)
    header = ex.timeseries_header(cfg.d + 2)
    t0 = time.time()

    def progress(rec):
        # rows are appended as they are produced so a failed run keeps its history
        ex._append_csv(ts_path, header, [ex.timeseries_row(rec, float("nan"))])
        log.info("t = %.4f  (%.1f s)", rec["t"], time.time() - t0)

    result = ex.run(cfg, progress=progress)
    ex.write_timeseries(ts_path, result)
    if result.errors is not None:
        per_field, combined = result.errors
        h = ex.mesh_h(cfg, _mesh_edge(cfg))
        ex.write_errors(os.path.join(out, "errors.csv"), cfg, per_field, combined, h)
        print(f"{cfg.experiment} N={cfg.N} {cfg.family} mesh={'x'.join(map(str, cfg.mesh))} "
              f"t={result.t:.6g} combined L2 error = {combined:.6g}")
    else:
        ent = [r["entropy"] for r in result.series]
        print(f"{cfg.experiment} N={cfg.N} {cfg.family} reached t={result.t:.6g} in {result.steps} steps; "
              f"entropy {ent[0]:.10g} -> {ent[-1]:.10g}")
    return EXIT_OK


def _mesh_edge(cfg):
    box = {"vortex2d": (20.0,), "vortex3d": (15.0,), "shockvortex": (2.0,), "tgv": (2 * 3.141592653589793,)}
    return box[cfg.experiment][0] / cfg.mesh[0]


def cmd_derivative_demo(args):
    out = _outdir(args)
    rows = []
    for N in parse_int_list(args.N):
        e_dec, e_gsbp = ex.derivative_demo(N, args.family)
        rows.append([N, e_dec, e_gsbp])
        print(f"N={N:2d}  decoupled {e_dec:.6e}  gsbp {e_gsbp:.6e}")
    path = os.path.join(out, "derivative.csv")
    if os.path.exists(path):
        os.remove(path)
    ex._append_csv(path, ["N", "err_decoupled", "err_gsbp"], rows)
    return EXIT_OK


def cmd_operator_check(args):
    out = _outdir(args)
    rows = ex.operator_check(parse_int_list(args.N), parse_families(args.families))
    worst = max(r[3] for r in rows)
    failed = [r for r in rows if not r[3] <= OPERATOR_TOL]
    with open(os.path.join(out, "operator_report.txt"), "w") as fh:
        fh.write(f"tolerance {OPERATOR_TOL:.1e}\n")
        for fam, N, name, r in rows:
            fh.write(f"{fam:6s} N={N:2d} {name:20s} {r:.3e} {'ok' if r <= OPERATOR_TOL else 'FAIL'}\n")
        fh.write(f"max residual {worst:.3e}\n")
    print(f"{len(rows)} residuals checked, max {worst:.3e}, {len(failed)} above {OPERATOR_TOL:.0e}")
    return EXIT_PROPERTY if failed else EXIT_OK


def cmd_cost_model(args):
    out = _outdir(args)
    rows = ex.cost_table(parse_int_list(args.N))
    path = os.path.join(out, "cost.csv")
    if os.path.exists(path):
        os.remove(path)
    ex._append_csv(path, ["N", "scheme", "flux_evals", "matrix_ops"], rows)
    for N, sch, fe, mo in rows:
        print(f"N={N}  {sch:9s}  flux evals {fe:6d}  matrix ops {mo:6d}")
    return EXIT_OK


COMMANDS = {
    "vortex2d": cmd_run, "vortex3d": cmd_run, "shockvortex": cmd_run, "tgv": cmd_run,
    "derivative-demo": cmd_derivative_demo, "operator-check": cmd_operator_check, "cost-model": cmd_cost_model,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except ConfigurationError as err:
        print(f"esdg: configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as err:
        print(f"esdg: configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (AdmissibilityError, IntegrationError, GeometryError, FloatingPointError) as err:
        print(f"esdg: run failed: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
