"""Taylor-Green vortex: kinetic energy and its dissipation rate.

    python scripts/taylor_green.py                # reduced run (N=3, 4^3)
    python scripts/taylor_green.py --full          # N=7, 8^3 (long)
"""

import argparse
import os

from esdg import experiments as ex


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--full", action="store_true")
    p.add_argument("--family", default="gauss")
    p.add_argument("--warp", default="none", help="'tgv' applies the sinusoidal warp")
    p.add_argument("--tfinal", type=float, default=20.0)
    p.add_argument("--out", default="runs/tgv")
    args = p.parse_args()
    os.makedirs(args.out, exist_ok=True)
    cfg = ex.preset("tgv-full" if args.full else "tgv", family=args.family, warp=args.warp, t_final=args.tfinal)
    res = ex.run(cfg, progress=lambda r: print(f"t={r['t']:6.2f}  kappa={r['kappa']:.8f}", flush=True))
    ex.write_timeseries(os.path.join(args.out, f"tgv_N{cfg.N}_{cfg.family}.csv"), res)


if __name__ == "__main__":
    main()
