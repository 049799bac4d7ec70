"""Survey of concentration tube widths after the channels at dt = tau, in desk units."""

import argparse

import numpy as np

from qtstar.channel import apply_galilean_decoherence
from qtstar.coherent import random_superposition, tube_widths
from qtstar.core import GalileanConfig
from qtstar.kernel import Grid1D, kernel_from_wavefunction


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--states", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = GalileanConfig(1.0, 1.0, 0.25)
    grid = Grid1D.centered(256, 16.0)
    rng = np.random.default_rng(args.seed)
    xs, vs = [], []
    for _ in range(args.states):
        W = kernel_from_wavefunction(random_superposition(rng, grid, 1.0))
        tw = tube_widths(apply_galilean_decoherence(W, cfg, 1.0), 1.0)
        xs.append(tw.position)
        vs.append(tw.velocity / tw.label.sigma_u)
    for name, vals in (("position / sigma_x", xs), ("velocity / sigma_u", vs)):
        print(f"{name:<20} min {min(vals):.3f}  median {np.median(vals):.3f}  max {max(vals):.3f}")


if __name__ == "__main__":
    main()
