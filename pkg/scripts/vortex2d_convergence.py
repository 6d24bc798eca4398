"""2D isentropic vortex convergence sweep (affine or warped meshes).

    python scripts/vortex2d_convergence.py --N 2 3 --levels 3 --warp none --out runs/vortex2d
"""

import argparse
import os

from esdg import experiments as ex
from esdg.timestepping import observed_order


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--N", type=int, nargs="+", default=[2])
    p.add_argument("--families", nargs="+", default=["gll", "gauss"])
    p.add_argument("--levels", type=int, default=3, help="number of meshes, starting at 16x8")
    p.add_argument("--warp", default="none")
    p.add_argument("--tfinal", type=float, default=5.0)
    p.add_argument("--out", default="runs/vortex2d")
    args = p.parse_args()
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "errors.csv")
    if os.path.exists(path):
        os.remove(path)
    for N in args.N:
        for fam in args.families:
            errs = []
            for lev in range(args.levels):
                mesh = (16 * 2 ** lev, 8 * 2 ** lev)
                cfg = ex.preset("vortex2d", N=N, family=fam, mesh=mesh, warp=args.warp, t_final=args.tfinal)
                res = ex.run(cfg)
                per_field, combined = res.errors
                ex.write_errors(path, cfg, per_field, combined, ex.mesh_h(cfg, 20.0 / mesh[0]))
                errs.append(combined)
                print(f"N={N} {fam:5s} {mesh[0]:3d}x{mesh[1]:<3d} error {combined:.6e}", flush=True)
            if len(errs) > 1:
                print(f"   observed orders {observed_order(errs).round(2).tolist()}")


if __name__ == "__main__":
    main()
