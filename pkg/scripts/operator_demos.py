"""Derivative demo for e^{-4x^2} and the per-element cost table."""

from esdg import experiments as ex


def main():
    print(" N   decoupled      GSBP")
    for N in range(1, 16):
        dec, gsbp = ex.derivative_demo(N)
        print(f"{N:2d}   {dec:.6e}   {gsbp:.6e}")
    print()
    print(" N  scheme      flux evals  matrix ops")
    for N, scheme, fe, mo in ex.cost_table(range(1, 8)):
        print(f"{N:2d}  {scheme:10s}  {fe:10d}  {mo:10d}")


if __name__ == "__main__":
    main()
