"""3D isentropic vortex on the two coarsest meshes (optionally warped)."""

import argparse

from esdg import experiments as ex


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--family", default="gauss")
    p.add_argument("--warp", default="none", help="'curved' applies the 3D warp")
    p.add_argument("--levels", type=int, default=2)
    args = p.parse_args()
    for lev in range(args.levels):
        mesh = (6 * 2 ** lev, 8 * 2 ** lev, 2 * 2 ** lev)
        res = ex.run(ex.preset("vortex3d", N=args.N, family=args.family, mesh=mesh, warp=args.warp))
        print(f"{'x'.join(map(str, mesh)):8s} h={15.0 / mesh[0]:.4g} error {res.errors[1]:.6e}", flush=True)


if __name__ == "__main__":
    main()
