"""Ratio of the space-time norm to the sharp bound for a few radial profiles."""
import argparse

import numpy as np

from sharpwave import constants as K
from sharpwave.functionals import I_beta, SignMode, lhs_norm_sq
from sharpwave.model import RadialData, Setting, gaussian, preset

PROFILES = {
    "foschi": lambda d: preset("foschi", d),
    "gaussian": lambda d: gaussian(),
    "r^-1/2 e^-r": lambda d: RadialData(lambda r: np.exp(-r) / np.sqrt(r), 0.5, 1.0, "r^-1/2 e^-r"),
    "(1+r) e^-r^2": lambda d: RadialData(lambda r: (1 + r) * np.exp(-r * r), 0.0, 1.0, "(1+r) e^-r^2"),
}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--dim", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--beta", type=float, nargs="+", default=[0.0, 0.25, 0.5])
    args = p.parse_args()
    for d in args.dim:
        for beta in args.beta:
            s = Setting(d, beta)
            if not s.admissible_sharp:
                continue
            cells = []
            for name, make in PROFILES.items():
                f = make(d)
                r = lhs_norm_sq(f, f, s, SignMode.PlusMinus) / (K.W(beta, d) * I_beta(f, f, s))
                cells.append(f"{name} {r:.6f}")
            print(f"d={d} beta={beta:g}: " + "  ".join(cells))


if __name__ == "__main__":
    main()
