"""Time fraction-free Bareiss against plain Gaussian elimination.

Matrices have small integer-coefficient polynomial entries in Q(t), where
Bareiss keeps entries polynomial and Gauss builds rational functions.

    python3 scripts/bench_det.py --sizes 2 3 4 5 --trials 5
"""

import argparse
import random
import time
from dataclasses import dataclass

from torsionlab.exactfield import QQ, ExactMatrix, FieldDescriptor, FieldElement, det, det_gauss


@dataclass
class BenchConfig:
    sizes: tuple = (2, 3, 4, 5)
    trials: int = 5
    degree: int = 2
    seed: int = 0


def random_poly_matrix(n, degree, rng, desc):
    t = FieldElement.gen(desc)
    def entry():
        acc = FieldElement.constant(0, desc)
        for k in range(degree + 1):
            acc = acc + rng.randint(-3, 3) * t ** k
        return acc
    return ExactMatrix([[entry() for _ in range(n)] for _ in range(n)])


def run(cfg: BenchConfig):
    rng = random.Random(cfg.seed)
    desc = FieldDescriptor(QQ.base, "t")
    print("n\tbareiss_s\tgauss_s\tagree")
    for n in cfg.sizes:
        mats = [random_poly_matrix(n, cfg.degree, rng, desc) for _ in range(cfg.trials)]
        t0 = time.perf_counter()
        a = [det(m) for m in mats]
        t1 = time.perf_counter()
        b = [det_gauss(m) for m in mats]
        t2 = time.perf_counter()
        print(f"{n}\t{(t1 - t0) / cfg.trials:.4f}\t{(t2 - t1) / cfg.trials:.4f}\t{a == b}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=list(BenchConfig.sizes))
    p.add_argument("--trials", type=int, default=BenchConfig.trials)
    p.add_argument("--degree", type=int, default=BenchConfig.degree)
    p.add_argument("--seed", type=int, default=BenchConfig.seed)
    a = p.parse_args()
    run(BenchConfig(tuple(a.sizes), a.trials, a.degree, a.seed))


if __name__ == "__main__":
    main()
