"""Print the blow-up scan of the lower and upper bounds as delta -> 0."""
import argparse

from sharpwave.experiments import counterexample_scan
from sharpwave.model import Setting


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--beta", type=float, default=-0.25)
    p.add_argument("--kmin", type=int, default=7)
    p.add_argument("--kmax", type=int, default=14)
    args = p.parse_args()
    deltas = [2.0**-k for k in range(args.kmin, args.kmax + 1)]
    s1, s2 = counterexample_scan(Setting(args.dim, args.beta), deltas)
    print(f"{'delta':>12s} {'I1':>14s} {'I2':>14s} {'I1/I2':>12s}")
    for x, a, b in zip(s1.deltas, s1.values, s2.values):
        print(f"{x:12.4e} {a:14.6e} {b:14.6e} {a / b:12.6f}")
    for s in (s1, s2):
        print(f"{s.name}: slope {s.slope:.5f} +- {s.slope_stderr:.1e}, expected {s.theory_slope:.5f}")


if __name__ == "__main__":
    main()
