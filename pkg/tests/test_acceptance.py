"""Acceptance criteria, one test per criterion.

Each test runs inside ``acceptance.criterion(label, budget)``, which times it,
fails it when the budget is exceeded, and feeds the pass/fail summary printed
at the end of the session.  Criterion 9 (whole suite under 120 s) is checked
by the session hooks in conftest.py.
"""

import itertools
import random
from fractions import Fraction

from test_cellcx import random_triple
from torsionlab.cellcx import (det_rho_of_class, euler_shift_sign, milnor_turaev_torsion, shift_euler,
                               standard_orientation)
from torsionlab.complexes import (CochainComplex, F_alpha, enumerate_tau_chains, fusion_report,
                                  fusion_sign_y, is_acyclic, is_admissible, long_exact_sequence,
                                  torsion, torsion_acyclic, unsigned_F_alpha, verify_dimension)
from torsionlab.exactfield import (QQ, ExactMatrix, FieldDescriptor, FieldElement, Gaussian, evaluate_at,
                                   is_unit_monomial)
from torsionlab.maptorus import (CellularSelfMap, MonodromyRep, _p_matrices, _wang_dims, induced_hmaps,
                                 mapping_cone_complex, verify_maptor, wang_sequence)
from torsionlab.models import T, circle, circle_orientation, circle_rep
from torsionlab.sampling import random_acyclic_complex, random_complex, random_shape, random_split_sequence

t = FieldElement.gen(T)
W = FieldDescriptor(QQ.base, "w")
w = FieldElement.gen(W)


def test_criterion_1_tau_chains_compute_torsion(acceptance):
    with acceptance.criterion("criterion 1 (tau-chain / Milnor equivalence)", 20) as info:
        rng = random.Random(101)
        complexes = chains = 0
        while complexes < 200:
            x = random_acyclic_complex(random_shape(rng, max_degree=4, max_dim=5), rng)
            tors = torsion_acyclic(x)
            for a in enumerate_tau_chains(x.dims):
                if unsigned_F_alpha(x, a) is not None:
                    assert F_alpha(x, a) == tors, (x.dims, a)
                    chains += 1
            complexes += 1
        info["text"] = f"{complexes} complexes, {chains} nondegenerate F_alpha"


def _lee_sequence(c0, k, rng):
    """C0 fixed; C2 is 1 -> 1 in degrees (k, k+1) with a random nonzero d."""
    n = len(c0.dims)
    dims = [0] * n
    dims[k] = dims[k + 1] = 1
    diffs = [ExactMatrix.zeros(dims[q + 1], dims[q]) for q in range(n - 1)]
    diffs[k] = ExactMatrix([[rng.choice([1, -1, 2, -3, Fraction(1, 2)])]])
    c2 = CochainComplex(tuple(dims), tuple(diffs))
    return random_split_sequence(rng, c0=c0, c2=c2, twist=rng.random() < 0.8, mix=rng.random() < 0.8)


def test_criterion_2_fusion_lemma(acceptance):
    with acceptance.criterion("criterion 2 (fusion lemma)", 10) as info:
        rng = random.Random(202)
        for _ in range(100):
            s = random_split_sequence(rng)
            r = fusion_report(s)
            assert r.commutes and r.y == fusion_sign_y(s)
        c0 = random_acyclic_complex((1, 3, 3, 1), random.Random(7))
        ys = set()
        for _ in range(20):
            s = _lee_sequence(c0, 1, rng)
            r = fusion_report(s)
            assert r.commutes
            ys.add(r.y)
        assert len(ys) == 1
        info["text"] = f"100 split sequences commute; 20 fixed-C0 sequences share y={ys.pop()}"


def _norm(z):
    """|z|^2 as an exact rational."""
    p = z * z.conjugate()
    return p if isinstance(p, Fraction) else p.re


def test_criterion_3_circle_torsion(acceptance):
    with acceptance.criterion("criterion 3 (circle torsion)", 1) as info:
        tau = milnor_turaev_torsion(circle(), circle_rep(), circle_orientation())
        unit = is_unit_monomial(tau / (t - 1))
        assert unit is not None
        sign, m = unit
        assert m == 0  # pinned exponent
        rng = random.Random(303)
        for _ in range(10):
            z = Gaussian(Fraction(rng.randint(-9, 9), rng.randint(1, 4)), Fraction(rng.randint(1, 9), rng.randint(1, 4)))
            v = evaluate_at(tau, z).constant_value()
            # |T(z)|^2 = |(z-1)^2/z| |z|^(2m+1), squared to stay rational
            lhs = _norm(v) ** 2
            rhs = _norm(z - 1) ** 2 / _norm(z) * _norm(z) ** (2 * m + 1)
            assert lhs == rhs
        info["text"] = f"T = {sign:+d} t^{m} (t - 1); 10 Gaussian points agree"


def test_criterion_4_dependence_laws(acceptance):
    with acceptance.criterion("criterion 4 (Euler structure and orientation laws)", 10) as info:
        rng = random.Random(404)
        for _ in range(50):
            x, r, cell, word = random_triple(rng)
            o = standard_orientation(x)
            base = milnor_turaev_torsion(x, r, o)
            shifted = milnor_turaev_torsion(shift_euler(x, cell, word), r, o)
            assert shifted == base * det_rho_of_class(r, word) ** euler_shift_sign(cell[0])
            assert milnor_turaev_torsion(x, r, o.flipped()) == (-1) ** r.dim * base
        info["text"] = "50 triples"


def _check_wang(m, rho):
    s = wang_sequence(m, rho)
    assert is_acyclic(long_exact_sequence(s))
    cone = mapping_cone_complex(m, rho)
    assert list(cone.cohomology.dims) == _wang_dims(_p_matrices(induced_hmaps(m), rho))


def test_criterion_5_mapping_tori(acceptance):
    with acceptance.criterion("criterion 5 (mapping tori)", 5) as info:
        s1 = CochainComplex.from_lists((1, 1), [[[0]]])
        torus = CellularSelfMap(s1, (ExactMatrix([[1]]), ExactMatrix([[1]])))
        klein = CellularSelfMap(s1, (ExactMatrix([[1]]), ExactMatrix([[-1]])))
        rho = MonodromyRep(ExactMatrix([[w]]))
        units = []
        for m in (torus, klein):
            r = verify_maptor(m, rho)
            assert r.passed
            unit = FieldElement.constant(r.unit_sign, W) * w ** r.unit_exponent
            assert r.torsion_side == unit * r.zeta_side
            units.append(r.unit_string())
            for v in (rho, MonodromyRep(ExactMatrix([[1]], 1, 1, W)), MonodromyRep(ExactMatrix([[-1]], 1, 1, W))):
                _check_wang(m, v)
        assert verify_maptor(klein, rho).zeta_side == (w - 1) / (w + 1)
        info["text"] = f"T^2 unit {units[0]}, Klein unit {units[1]}"


def test_criterion_6_triangulation_independence(acceptance):
    with acceptance.criterion("criterion 6 (triangulation independence)", 1) as info:
        one = milnor_turaev_torsion(circle(1), circle_rep(), circle_orientation(1))
        two = milnor_turaev_torsion(circle(2), circle_rep(), circle_orientation(2))
        assert one == two
        info["text"] = "one- and two-vertex circles agree"


def test_criterion_7_dimension_formula(acceptance):
    with acceptance.criterion("criterion 7 (dimension formula)", 30) as info:
        shapes = [s for n in range(1, 4) for s in itertools.product(range(4), repeat=n + 1)
                  if is_admissible(s)]
        rng = random.Random(707)
        for s in shapes:
            assert verify_dimension(s, rng, samples=10), s
        info["text"] = f"{len(shapes)} admissible shapes, 10 samples each"


def test_criterion_8_torsion_choice_independence(acceptance):
    with acceptance.criterion("criterion 8 (torsion independent of choices)", 10) as info:
        rng = random.Random(808)
        for i in range(100):
            x = random_complex([rng.randint(0, 4) for _ in range(rng.randint(1, 4))], rng)
            h = x.cohomology.bases
            assert torsion(x, h, rng=random.Random(i)) == torsion(x, h)
        info["text"] = "100 complexes"
