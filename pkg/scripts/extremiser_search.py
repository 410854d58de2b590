"""Nelder-Mead search for the maximiser of the normalised bilinear ratio over several seeds."""
import argparse

from sharpwave.experiments import extremiser_search
from sharpwave.functionals import SignMode
from sharpwave.model import Setting


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--mode", choices=("pm", "pp"), default="pm")
    p.add_argument("--params", type=int, default=4)
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--seeds", type=int, default=4)
    args = p.parse_args()
    s = Setting(args.dim, args.beta)
    for seed in range(args.seeds):
        rep = extremiser_search(s, SignMode(args.mode), args.params, seed, args.budget)
        c = rep.computed
        print(f"seed {seed}: best {c['best_ratio']:.10f}  start {c['start_ratio']:.6f}  "
              f"evals {int(c['evaluations'])}  max|theta_j| {c['max_perturbation']:.1e}  {rep.status}")


if __name__ == "__main__":
    main()
