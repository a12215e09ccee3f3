import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torsionlab.cellcx import (CohomologyOrientation, EquivariantCellComplex, GroupPresentation,
                               GroupRingElement, Representation, argument_invariant,
                               assemble_twisted_cochain, det_rho_of_class, euler_shift_sign,
                               evaluate_word, failing_relation, format_group_ring, format_word,
                               milnor_turaev_torsion, parse_group_ring, parse_word, reduce_word,
                               shift_euler,
                               standard_orientation, untwisted_orientation_sign,
                               validate_representation)
from torsionlab.errors import AcyclicityError, BasisError, ShapeError, ValidationError
from torsionlab.exactfield import QQ, QQI, ExactMatrix, FieldElement, Gaussian, det, inverse
from torsionlab.models import (T, circle, circle_orientation, circle_rep, klein_bottle, klein_rep,
                               scalar, torus, torus_rep)

t = FieldElement.gen(T)


def c(x, desc=QQ):
    return FieldElement.constant(x, desc)


# --- words and group rings ---------------------------------------------------

def test_word_parsing():
    assert parse_word("1") == ()
    assert parse_word("") == ()
    assert parse_word("a b^-1") == (("a", 1), ("b", -1))
    assert parse_word("a a^-1 b") == (("b", 1),)
    assert parse_word("g^3") == (("g", 1),) * 3
    assert format_word(parse_word("a b^-1")) == "a b^-1"
    assert format_word(()) == "1"
    with pytest.raises(ValueError):
        parse_word("a^")


words = st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from((1, -1))), max_size=6)


@given(words)
def test_word_round_trip(w):
    r = reduce_word(w)
    assert parse_word(format_word(r)) == r


def test_group_ring_canonical_form():
    x = GroupRingElement([(1, parse_word("g")), (-1, ()), (2, parse_word("g")), (0, parse_word("h"))])
    assert x.terms == ((-1, ()), (3, parse_word("g")))
    assert parse_group_ring(format_group_ring(x)) == x
    assert parse_group_ring("0") == GroupRingElement()
    assert format_group_ring(GroupRingElement([(1, ()), (-1, ())])) == "0"


def test_group_ring_product():
    g = GroupRingElement.word(parse_word("g"))
    one = GroupRingElement.word(())
    assert (g - one) * (g + one) == GroupRingElement([(1, parse_word("g g")), (-1, ())])


# --- representations ---------------------------------------------------------

def test_validate_representation_examples():
    assert validate_representation(circle_rep())
    k = klein_rep(-1, t)
    assert validate_representation(k)
    p = GroupPresentation(("a",), (parse_word("a a"),))
    bad = Representation(p, {"a": scalar(2)})
    assert not validate_representation(bad)
    assert failing_relation(bad) == parse_word("a a")


def test_presentation_rejects_unknown_generators():
    with pytest.raises(ValidationError):
        GroupPresentation(("a",), (parse_word("b"),))


def test_evaluate_word_examples():
    r = circle_rep()
    assert evaluate_word((), r) == ExactMatrix.identity(1, T)
    assert evaluate_word(parse_word("g g"), r) == ExactMatrix([[t * t]])
    p = GroupPresentation(("a", "b"))
    r2 = Representation(p, {"a": ExactMatrix([[0, 1], [1, 0]]), "b": ExactMatrix([[2, 0], [0, 1]])})
    assert evaluate_word(parse_word("a b^-1"), r2) == ExactMatrix([[0, 1], [Fraction(1, 2), 0]])


def test_det_rho_of_class_examples():
    assert det_rho_of_class(circle_rep(), parse_word("g")) == t
    assert det_rho_of_class(circle_rep(), parse_word("g g^-1")) == c(1, T)
    p = GroupPresentation(("a", "b"))
    r2 = Representation(p, {"a": ExactMatrix([[0, 1], [1, 0]]), "b": ExactMatrix([[2, 0], [0, 1]])})
    # det(a) det(b) = (-1)(2)
    assert det_rho_of_class(r2, parse_word("a b")) == c(-2)


# --- assembly --------------------------------------------------------------

def test_assemble_circle():
    x = circle()
    cc = assemble_twisted_cochain(x, circle_rep())
    assert cc.dims == (1, 1)
    assert cc.d(0) == ExactMatrix([[t - 1]])
    triv = assemble_twisted_cochain(x, circle_rep(c(1, T)))
    assert triv.d(0).is_zero()


def test_assemble_with_shifted_edge_lift():
    x = shift_euler(circle(), (1, 0), "g")
    assert assemble_twisted_cochain(x, circle_rep()).d(0) == ExactMatrix([[t * (t - 1)]])


def test_assemble_rejects_invalid_representation():
    x = torus()
    r = torus_rep(t, 2)
    p = GroupPresentation(("a", "b"), (parse_word("a b a^-1 b^-1"),))
    bad = Representation(p, {"a": ExactMatrix([[0, 1], [1, 0]]), "b": ExactMatrix([[1, 1], [0, 1]])})
    assert assemble_twisted_cochain(x, r).is_acyclic()
    with pytest.raises(ValidationError):
        assemble_twisted_cochain(x, bad)


def test_cell_complex_shape_checks():
    p = GroupPresentation(("g",))
    with pytest.raises(ShapeError):
        EquivariantCellComplex(p, (1, 1), ([[GroupRingElement()], [GroupRingElement()]],))
    with pytest.raises(ShapeError):
        EquivariantCellComplex(p, (1, 1), ([[GroupRingElement()]],), ordering=(0, 0))
    with pytest.raises(ValidationError):
        EquivariantCellComplex(p, (1, 1), ([[GroupRingElement.word(parse_word("h"))]],))


def test_ordering_permutes_blocks():
    x = circle(2)
    y = EquivariantCellComplex(x.presentation, x.cells, x.boundaries, x.lifts, (1, 0, 3, 2), x.names)
    a, b = assemble_twisted_cochain(x, circle_rep()), assemble_twisted_cochain(y, circle_rep())
    flip = ExactMatrix([[0, 1], [1, 0]])
    assert b.d(0) == flip @ a.d(0) @ flip


# --- torsion and its dependence laws ----------------------------------------

def test_circle_torsion_is_unit_times_t_minus_1():
    v = milnor_turaev_torsion(circle(), circle_rep(), circle_orientation())
    assert v == -(t - 1)  # pinned unit: -1


def test_circle_trivial_rep_is_not_acyclic():
    with pytest.raises(AcyclicityError) as e:
        milnor_turaev_torsion(circle(), circle_rep(c(1, T)), circle_orientation())
    assert e.value.dims == [1, 1]


def test_untwisted_sign_examples():
    x = circle()
    o = circle_orientation()
    base = untwisted_orientation_sign(x, o)
    assert base == -1  # N = 5 for the zero differential on (1, 1)
    neg0 = CohomologyOrientation((((-1,),), ((1,),)))
    neg1 = CohomologyOrientation((((1,),), ((-1,),)))
    both = CohomologyOrientation((((-1,),), ((-1,),)))
    assert untwisted_orientation_sign(x, neg0) == -base
    assert untwisted_orientation_sign(x, neg1) == -base
    assert untwisted_orientation_sign(x, both) == base
    with pytest.raises(BasisError):
        untwisted_orientation_sign(x, CohomologyOrientation((((1,),), ())))


def test_shift_examples():
    x, r, o = circle(), circle_rep(), circle_orientation()
    base = milnor_turaev_torsion(x, r, o)
    assert milnor_turaev_torsion(shift_euler(x, (1, 0), "g"), r, o) == base * t
    assert shift_euler(x, (1, 0), "1").lifts == x.lifts
    k = klein_bottle()
    kr = klein_rep(-1, t)
    kb = milnor_turaev_torsion(k, kr)
    assert milnor_turaev_torsion(shift_euler(k, (0, 0), "a b a b^-1"), kr) == kb


def test_orientation_flip_examples():
    x, r, o = circle(), circle_rep(), circle_orientation()
    assert milnor_turaev_torsion(x, r, o.flipped()) == -milnor_turaev_torsion(x, r, o)


def _torus_rep_2d(rng):
    """Commuting 2x2 images: a common eigenbasis P with diagonal entries."""
    while True:
        p = ExactMatrix([[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)])
        if det(p):
            break
    pinv = inverse(p)
    a = p @ ExactMatrix([[t, 0], [0, rng.choice([2, -1, 3])]], 2, 2, T) @ pinv
    b = p @ ExactMatrix([[rng.choice([2, -1]), 0], [0, rng.choice([1, 2, Fraction(1, 2)])]], 2, 2, T) @ pinv
    return Representation(torus().presentation, {"a": a, "b": b})


def _klein_rep_2d(rng):
    x = Fraction(rng.choice([2, 3, -2]), rng.choice([1, 3]))
    a = ExactMatrix([[x, 0], [0, 1 / x]], 2, 2, T)
    b = ExactMatrix([[0, t], [rng.choice([1, 2, -1]), 0]], 2, 2, T)
    return Representation(klein_bottle().presentation, {"a": a, "b": b})


def random_triple(rng):
    """(complex, representation, cell, word) with an acyclic twist."""
    while True:
        kind = rng.choice(["circle", "torus", "klein", "torus2", "klein2"])
        if kind == "circle":
            x = circle(rng.randint(1, 3))
            r = circle_rep(t * rng.choice([1, 2, -1, Fraction(1, 3)]))
        elif kind == "torus":
            x, r = torus(), torus_rep(t, rng.choice([2, -1, 3]))
        elif kind == "klein":
            x, r = klein_bottle(), klein_rep(-1, t * rng.choice([1, 2]))
        elif kind == "torus2":
            x, r = torus(), _torus_rep_2d(rng)
        else:
            x, r = klein_bottle(), _klein_rep_2d(rng)
        if not assemble_twisted_cochain(x, r).is_acyclic():
            continue
        gens = x.presentation.generators
        w = tuple((rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(1, 3)))
        q = rng.randrange(len(x.cells))
        cell = (q, rng.randrange(x.cells[q]))
        return x, r, cell, w


@given(st.integers(0, 10**6))
def test_euler_dependence_law(seed):
    x, r, cell, w = random_triple(random.Random(seed))
    o = standard_orientation(x)
    before = milnor_turaev_torsion(x, r, o)
    after = milnor_turaev_torsion(shift_euler(x, cell, w), r, o)
    assert after == before * det_rho_of_class(r, w) ** euler_shift_sign(cell[0])


@given(st.integers(0, 10**6))
def test_orientation_flip_law(seed):
    x, r, _, _ = random_triple(random.Random(seed))
    o = standard_orientation(x)
    assert milnor_turaev_torsion(x, r, o.flipped()) == (-1) ** r.dim * milnor_turaev_torsion(x, r, o)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_triangulation_independence_circle(n):
    one = milnor_turaev_torsion(circle(1), circle_rep(), circle_orientation(1))
    many = milnor_turaev_torsion(circle(n), circle_rep(), circle_orientation(n))
    assert one == many


def _unimodular_rep(rng):
    """2x2 images of determinant 1 (so det o rho is trivial) with an acyclic twist."""
    x = Fraction(rng.choice([2, 3, -2]), rng.choice([1, 5]))
    if rng.random() < 0.5:
        y = Fraction(rng.choice([2, -3]), rng.choice([1, 7]))
        p = ExactMatrix([[1, rng.randint(-2, 2)], [0, 1]])
        a = p @ ExactMatrix([[x, 0], [0, 1 / x]]) @ inverse(p)
        b = p @ ExactMatrix([[y, 0], [0, 1 / y]]) @ inverse(p)
        return torus(), Representation(torus().presentation, {"a": a, "b": b})
    y = Fraction(rng.choice([1, 2, -3]), rng.choice([1, 3]))
    a = ExactMatrix([[x, 0], [0, 1 / x]])
    b = ExactMatrix([[0, y], [-1 / y, 0]])
    return klein_bottle(), Representation(klein_bottle().presentation, {"a": a, "b": b})


@given(st.integers(0, 10**6))
def test_unimodular_representation_is_shift_invariant(seed):
    rng = random.Random(seed)
    x, r = _unimodular_rep(rng)
    assert validate_representation(r)
    base = milnor_turaev_torsion(x, r)
    q = rng.randrange(3)
    cell = (q, rng.randrange(x.cells[q]))
    w = tuple((rng.choice("ab"), rng.choice((1, -1))) for _ in range(rng.randint(1, 3)))
    assert milnor_turaev_torsion(shift_euler(x, cell, w), r) == base


def test_torus_with_character_has_trivial_torsion():
    assert milnor_turaev_torsion(torus(), torus_rep(t, 2)) == c(1, T)


def test_klein_bottle_values():
    assert milnor_turaev_torsion(klein_bottle(), klein_rep(-1, t)) == c(1, T)


def test_standard_orientation_dimensions():
    for x in (circle(), circle(3), torus(), klein_bottle()):
        o = standard_orientation(x)
        assert untwisted_orientation_sign(x, o) in (1, -1)


# --- argument invariant -----------------------------------------------------

def test_argument_examples():
    assert argument_invariant(c(-1), math.pi) == 0.0
    assert math.isclose(argument_invariant(c(Gaussian(0, 1), QQI), math.pi), math.pi / 2, abs_tol=1e-12)
    assert math.isclose(argument_invariant(c(Gaussian(1, 1), QQI), 2 * math.pi), math.pi / 4, abs_tol=1e-12)
    with pytest.raises(ValueError):
        argument_invariant(c(0))
    with pytest.raises(ValueError):
        argument_invariant(t)


def test_argument_difference_is_orientation_free():
    x = circle()
    o = circle_orientation()
    r1 = circle_rep(c(Gaussian(0, 1), QQI))
    r2 = circle_rep(c(Gaussian(2, 1), QQI))
    diffs = []
    for oo in (o, o.flipped()):
        a1 = argument_invariant(milnor_turaev_torsion(x, r1, oo))
        a2 = argument_invariant(milnor_turaev_torsion(x, r2, oo))
        diffs.append((a1 - a2) % (2 * math.pi))
    assert math.isclose(diffs[0], diffs[1], abs_tol=1e-12)
