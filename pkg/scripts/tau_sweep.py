"""Sweep admissible shapes and tabulate tau-chains, degeneracy and agreement.

For each shape: number of tau-chains, the fraction that are degenerate on
random integer complexes, and whether every nondegenerate F_alpha matched
the torsion.

    python3 scripts/tau_sweep.py --max-degree 3 --max-dim 3 --samples 20
"""

import argparse
import itertools
import random
from dataclasses import dataclass

from torsionlab.complexes import (F_alpha, enumerate_tau_chains, is_admissible, torsion_acyclic,
                                  unsigned_F_alpha)
from torsionlab.sampling import random_acyclic_complex


@dataclass
class SweepConfig:
    max_degree: int = 3
    max_dim: int = 3
    samples: int = 20
    seed: int = 0


def run(cfg: SweepConfig):
    rng = random.Random(cfg.seed)
    print("shape\tchains\tdegenerate_frac\tall_match")
    for n in range(1, cfg.max_degree + 1):
        for shape in itertools.product(range(cfg.max_dim + 1), repeat=n + 1):
            if not is_admissible(shape) or not any(shape):
                continue
            chains = list(enumerate_tau_chains(shape))
            degenerate = total = 0
            match = True
            for _ in range(cfg.samples):
                x = random_acyclic_complex(shape, rng)
                tors = torsion_acyclic(x)
                for a in chains:
                    total += 1
                    if unsigned_F_alpha(x, a) is None:
                        degenerate += 1
                    elif F_alpha(x, a) != tors:
                        match = False
            frac = degenerate / total if total else 0.0
            print(f"{shape}\t{len(chains)}\t{frac:.3f}\t{match}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-degree", type=int, default=SweepConfig.max_degree)
    p.add_argument("--max-dim", type=int, default=SweepConfig.max_dim)
    p.add_argument("--samples", type=int, default=SweepConfig.samples)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    a = p.parse_args()
    run(SweepConfig(a.max_degree, a.max_dim, a.samples, a.seed))


if __name__ == "__main__":
    main()
