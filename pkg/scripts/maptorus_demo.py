"""Mapping tori of circle maps of degree k: cone torsion against the zeta side.

The map z -> z^k on a one-vertex circle acts by k on H^1.  For each k the
script prints the cone torsion over Q(w), the zeta side, and the unit
relating them.

    python3 scripts/maptorus_demo.py --degrees -2 -1 0 2 3
"""

import argparse
from dataclasses import dataclass

from torsionlab.complexes import CochainComplex
from torsionlab.errors import AcyclicityError
from torsionlab.exactfield import QQ, ExactMatrix, FieldDescriptor, FieldElement, pretty
from torsionlab.maptorus import CellularSelfMap, MonodromyRep, verify_maptor


@dataclass
class DemoConfig:
    degrees: tuple = (-2, -1, 0, 1, 2, 3)
    variable: str = "w"


def run(cfg: DemoConfig):
    desc = FieldDescriptor(QQ.base, cfg.variable)
    rho = MonodromyRep(ExactMatrix([[FieldElement.gen(desc)]]))
    s1 = CochainComplex.from_lists((1, 1), [[[0]]])
    print("k\tverdict\tunit\ttorsion\tzeta")
    for k in cfg.degrees:
        m = CellularSelfMap(s1, (ExactMatrix([[1]]), ExactMatrix([[k]])))
        try:
            r = verify_maptor(m, rho)
        except AcyclicityError as e:
            print(f"{k}\tnot acyclic\t\t{e}\t")
            continue
        verdict = "PASS" if r.passed else "FAIL"
        print(f"{k}\t{verdict}\t{r.unit_string(cfg.variable)}\t{pretty(r.torsion_side)}\t{pretty(r.zeta_side)}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--degrees", type=int, nargs="+", default=list(DemoConfig.degrees))
    p.add_argument("--variable", default=DemoConfig.variable)
    a = p.parse_args()
    run(DemoConfig(tuple(a.degrees), a.variable))


if __name__ == "__main__":
    main()
