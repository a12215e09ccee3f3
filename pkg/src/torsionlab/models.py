"""Standard cell complexes and representations used in examples and tests."""

from __future__ import annotations

from .cellcx import (CohomologyOrientation, EquivariantCellComplex, GroupPresentation,
                     GroupRingElement, Representation, parse_word)
from .exactfield import QQ, QQI, ExactMatrix, FieldDescriptor, FieldElement, const, one

T = FieldDescriptor(QQ.base, "t")


def _gr(*terms) -> GroupRingElement:
    return GroupRingElement((c, parse_word(w)) for c, w in terms)


ZERO = GroupRingElement()


def circle(n: int = 1, generator: str = "g") -> EquivariantCellComplex:
    """S^1 with n vertices and n edges; lifts follow the path v0 - e0 - v1 - ...

    Edge e_j runs from v_j to v_{j+1}; the last edge ends at g v0.
    """
    if n < 1:
        raise ValueError("circle needs at least one vertex")
    grid = [[ZERO] * n for _ in range(n)]  # rows: vertices, cols: edges
    for j in range(n):
        grid[j][j] = grid[j][j] - _gr((1, ""))
        if j < n - 1:
            grid[j + 1][j] = grid[j + 1][j] + _gr((1, ""))
        else:
            grid[0][j] = grid[0][j] + _gr((1, generator))
    names = (tuple(f"v{i}" for i in range(n)), tuple(f"e{i}" for i in range(n)))
    return EquivariantCellComplex(GroupPresentation((generator,)), (n, n), (grid,), names=names)


def circle_orientation(n: int = 1) -> CohomologyOrientation:
    """H^0 spanned by the all-ones cochain, H^1 by the dual of e0."""
    return CohomologyOrientation(((tuple([1] * n),), (tuple([1] + [0] * (n - 1)),)))


def torus() -> EquivariantCellComplex:
    """T^2 = <a, b | a b a^-1 b^-1> with one vertex, two edges, one face."""
    p = GroupPresentation(("a", "b"), (parse_word("a b a^-1 b^-1"),))
    d1 = [[_gr((1, "a"), (-1, "")), _gr((1, "b"), (-1, ""))]]
    d2 = [[_gr((1, ""), (-1, "b"))], [_gr((1, "a"), (-1, ""))]]
    names = (("v",), ("a", "b"), ("F",))
    return EquivariantCellComplex(p, (1, 2, 1), (d1, d2), names=names)


def klein_bottle() -> EquivariantCellComplex:
    """K = <a, b | a b a b^-1>; Fox derivatives give dF = (1 + ab) a~ + (a - 1) b~."""
    p = GroupPresentation(("a", "b"), (parse_word("a b a b^-1"),))
    d1 = [[_gr((1, "a"), (-1, "")), _gr((1, "b"), (-1, ""))]]
    d2 = [[_gr((1, ""), (1, "a b"))], [_gr((1, "a"), (-1, ""))]]
    names = (("v",), ("a", "b"), ("F",))
    return EquivariantCellComplex(p, (1, 2, 1), (d1, d2), names=names)


def scalar(x, descriptor: FieldDescriptor | None = None) -> ExactMatrix:
    if isinstance(x, FieldElement):
        return ExactMatrix([[x]], 1, 1, x.descriptor)
    return ExactMatrix([[const(x, descriptor or QQ)]], 1, 1, descriptor or QQ)


def circle_rep(value=None, generator: str = "g") -> Representation:
    """rho(g) = value (default: the variable t)."""
    if value is None:
        value = FieldElement.gen(T)
    return Representation(GroupPresentation((generator,)), {generator: scalar(value)})


def torus_rep(a, b) -> Representation:
    return Representation(torus().presentation, {"a": scalar(a), "b": scalar(b)})


def klein_rep(a, b) -> Representation:
    return Representation(klein_bottle().presentation, {"a": scalar(a), "b": scalar(b)})


def variable(descriptor: FieldDescriptor = T) -> FieldElement:
    return FieldElement.gen(descriptor)


__all__ = ["T", "QQI", "circle", "circle_orientation", "torus", "klein_bottle", "scalar",
           "circle_rep", "torus_rep", "klein_rep", "variable", "one"]
