"""Ritz values of H0 + lambda x^-alpha in a truncated spiked-oscillator basis.

Prints how the lowest eigenvalue settles as the block grows.  No reference
numbers exist for this problem; the script only exercises the matrix route.

    python3 scripts/variational_demo.py --gamma 2 --alpha 1 --lam 0.5
"""

import argparse
from dataclasses import dataclass

from appellf2.physics import OscillatorBasis, build_perturbation_matrix, variational_eigenvalues


@dataclass
class DemoConfig:
    gamma: float = 2.0
    alpha: float = 1.0
    lam: float = 0.5
    sizes: tuple[int, ...] = (1, 2, 4, 8, 12, 16)


def run(cfg: DemoConfig) -> list[tuple[int, float]]:
    basis = OscillatorBasis.from_gamma(cfg.gamma)
    out = []
    for n in cfg.sizes:
        block = build_perturbation_matrix(basis, cfg.alpha, n)
        out.append((n, float(variational_eigenvalues(basis, block, cfg.lam)[0])))
    return out


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gamma", type=float, default=2.0)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--lam", type=float, default=0.5)
    args = ap.parse_args()
    cfg = DemoConfig(args.gamma, args.alpha, args.lam)
    print("N  lowest_eigenvalue")
    for n, e in run(cfg):
        print(f"{n:<3d}{e:.15g}")
