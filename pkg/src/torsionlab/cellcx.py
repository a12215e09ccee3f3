"""Equivariant cell complexes, representations and Milnor-Turaev torsion.

A cell complex is given by its universal-cover chain complex over Z[G]:
``boundaries[q-1][t][s]`` is the group ring coefficient of the (q-1)-cell t
in the boundary of the q-cell s (left module, so ``d(s~) = sum a_ts t~``).
Each cell carries a lift word: replacing the lift of s by ``w s~`` turns
coefficients into ``w_s a_ts w_t^-1``.  The lift words are the combinatorial
Euler structure.

The twisted cochain complex puts V at every cell; the block of d^q at
(q+1-cell s, q-cell t) is rho(w_s a_ts w_t^-1).  Blocks are ordered by the
global cell ordering.

Conventions (fixed; checked by the test suite):

* ``milnor_turaev_torsion`` is 1 / torsion of the assembled complex, times
  the orientation sign raised to dim V.  For the circle with rho(g) = t it
  is -(t - 1).
* Multiplying the lift of a q-cell by w changes the Euler structure by the
  class (-1)^(q+1) [w], so the torsion gains det rho(w)^((-1)^(q+1)).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field, replace

from .complexes import CochainComplex, torsion, torsion_acyclic
from .errors import AcyclicityError, BasisError, ShapeError, ValidationError
from .exactfield import (QQ, ExactMatrix, FieldDescriptor, FieldElement, const, det, inverse,
                         sign_of_rational)

# --------------------------------------------------------------------------
# Words and group ring elements

Word = tuple  # tuple of (generator, +-1)

_TOKEN = re.compile(r"([A-Za-z_]\w*)(?:\^(-?\d+))?")


def reduce_word(w) -> Word:
    out = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def parse_word(s: str) -> Word:
    """"a b^-1 a^2" -> freely reduced word; "" or "1" is the identity."""
    s = s.strip()
    if s in ("", "1"):
        return ()
    letters = []
    for tok in s.split():
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        g, k = m.group(1), int(m.group(2) or 1)
        if k == 0:
            continue
        letters += [(g, 1 if k > 0 else -1)] * abs(k)
    return reduce_word(letters)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w)


def invert_word(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def word_mul(*ws) -> Word:
    return reduce_word(x for w in ws for x in w)


class GroupRingElement:
    """Finite Z-linear combination of freely reduced words."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc: dict = {}
        for coef, w in terms:
            w = reduce_word(w)
            acc[w] = acc.get(w, 0) + int(coef)
        self.terms = tuple(sorted(((c, w) for w, c in acc.items() if c), key=lambda t: t[1]))

    @classmethod
    def word(cls, w, coef=1):
        return cls([(coef, w)])

    def __add__(self, other):
        return GroupRingElement(self.terms + other.terms)

    def __neg__(self):
        return GroupRingElement((-c, w) for c, w in self.terms)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return GroupRingElement((a * b, word_mul(v, w)) for a, v in self.terms for b, w in other.terms)

    def conjugate(self, left: Word, right: Word) -> GroupRingElement:
        return GroupRingElement((c, word_mul(left, w, right)) for c, w in self.terms)

    def augmentation(self) -> int:
        return sum(c for c, _ in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"GroupRingElement({format_group_ring(self)!r})"


def format_group_ring(x: GroupRingElement) -> str:
    if not x.terms:
        return "0"
    return "{" + "; ".join(f"{c}: {format_word(w)}" for c, w in x.terms) + "}"


def parse_group_ring(s: str) -> GroupRingElement:
    """"0" or "{c: word; c: word}"."""
    s = s.strip()
    if s == "0":
        return GroupRingElement()
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError(f"bad group ring literal {s!r}")
    terms = []
    for part in s[1:-1].split(";"):
        if not part.strip():
            continue
        if ":" not in part:
            raise ValueError(f"group ring term {part.strip()!r} lacks 'coef: word'")
        c, w = part.split(":", 1)
        terms.append((int(c.strip()), parse_word(w)))
    return GroupRingElement(terms)


# --------------------------------------------------------------------------
# Presentations and representations


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(reduce_word(r) for r in self.relations))
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise ValidationError("duplicate generators")
        for r in self.relations:
            for g, _ in r:
                if g not in gens:
                    raise ValidationError(f"relation uses undeclared generator {g!r}")


@dataclass(frozen=True, eq=False)
class Representation:
    presentation: GroupPresentation
    images: dict
    _inv: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        imgs = dict(self.images)
        if set(imgs) != set(self.presentation.generators):
            raise ValidationError("need exactly one matrix per generator")
        sizes = {m.shape for m in imgs.values()}
        if len(sizes) != 1 or any(r != c for r, c in sizes):
            raise ValidationError("generator images must be square of one common size")
        desc = QQ
        for m in imgs.values():
            desc = desc.join(m.descriptor)
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "descriptor", desc)

    @property
    def dim(self) -> int:
        return next(iter(self.images.values())).rows

    def image(self, g: str, e: int) -> ExactMatrix:
        if e == 1:
            return self.images[g]
        if g not in self._inv:
            self._inv[g] = inverse(self.images[g])
        return self._inv[g]

    def evaluate(self, x: GroupRingElement) -> ExactMatrix:
        acc = ExactMatrix.zeros(self.dim, self.dim, self.descriptor)
        for c, w in x.terms:
            acc = acc + evaluate_word(w, self).scale(c)
        return acc


def failing_relation(r: Representation):
    """First relation that does not evaluate to the identity (or a singular generator)."""
    eye = ExactMatrix.identity(r.dim, r.descriptor)
    for g, m in r.images.items():
        if not det(m):
            return ((g, 1),)
    for rel in r.presentation.relations:
        if evaluate_word(rel, r) != eye:
            return rel
    return None


def validate_representation(r: Representation) -> bool:
    return failing_relation(r) is None


def evaluate_word(w: Word, r: Representation) -> ExactMatrix:
    acc = ExactMatrix.identity(r.dim, r.descriptor)
    for g, e in w:
        acc = acc @ r.image(g, e)
    return acc


def det_rho_of_class(r: Representation, w: Word) -> FieldElement:
    return det(evaluate_word(w, r))


def trivial_representation(p: GroupPresentation, descriptor: FieldDescriptor = QQ) -> Representation:
    eye = ExactMatrix.identity(1, descriptor)
    return Representation(p, {g: eye for g in p.generators})


# --------------------------------------------------------------------------
# Cell complexes


@dataclass(frozen=True, eq=False)
class EquivariantCellComplex:
    presentation: GroupPresentation
    cells: tuple
    boundaries: tuple  # boundaries[q-1]: cells[q-1] x cells[q] grid of GroupRingElement
    lifts: tuple = None  # per degree, one word per cell
    ordering: tuple = None  # position -> global cell id (degree-major ids)
    names: tuple = None  # per degree, optional cell names

    def __post_init__(self):
        cells = tuple(int(k) for k in self.cells)
        if not cells or any(k < 0 for k in cells):
            raise ShapeError(f"bad cell counts {cells}")
        bds = tuple(tuple(tuple(row) for row in b) for b in self.boundaries)
        if len(bds) != len(cells) - 1:
            raise ShapeError(f"{len(cells)} degrees need {len(cells) - 1} boundary matrices")
        for q, b in enumerate(bds, start=1):
            if len(b) != cells[q - 1] or any(len(row) != cells[q] for row in b):
                raise ShapeError(f"boundary {q} must be {cells[q - 1]}x{cells[q]}")
        lifts = self.lifts or tuple(((),) * k for k in cells)
        lifts = tuple(tuple(reduce_word(w) for w in per) for per in lifts)
        if tuple(len(x) for x in lifts) != cells:
            raise ShapeError("need one lift word per cell")
        total = sum(cells)
        ordering = tuple(self.ordering) if self.ordering is not None else tuple(range(total))
        if sorted(ordering) != list(range(total)):
            raise ShapeError("ordering must be a permutation of the cells")
        names = self.names
        if names is not None:
            names = tuple(tuple(n) for n in names)
            if tuple(len(x) for x in names) != cells:
                raise ShapeError("need one name per cell")
        gens = set(self.presentation.generators)
        for b in bds:
            for row in b:
                for x in row:
                    for _, w in x.terms:
                        if any(g not in gens for g, _ in w):
                            raise ValidationError(f"boundary word {format_word(w)} uses unknown generator")
        for per in lifts:
            for w in per:
                if any(g not in gens for g, _ in w):
                    raise ValidationError(f"lift word {format_word(w)} uses unknown generator")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "boundaries", bds)
        object.__setattr__(self, "lifts", lifts)
        object.__setattr__(self, "ordering", ordering)
        object.__setattr__(self, "names", names)

    @property
    def top(self) -> int:
        return len(self.cells) - 1

    def global_id(self, q: int, i: int) -> int:
        return sum(self.cells[:q]) + i

    def degree_order(self, q: int) -> list[int]:
        """Cell indices of degree q in the order given by ``ordering``."""
        pos = {g: p for p, g in enumerate(self.ordering)}
        return sorted(range(self.cells[q]), key=lambda i: pos[self.global_id(q, i)])

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * k for q, k in enumerate(self.cells))

    def find_cell(self, ref: str) -> tuple[int, int]:
        """Resolve "q:i" or a cell name to (degree, index)."""
        m = re.fullmatch(r"(\d+):(\d+)", ref.strip())
        if m:
            q, i = int(m.group(1)), int(m.group(2))
            if q >= len(self.cells) or i >= self.cells[q]:
                raise ShapeError(f"no cell {ref}")
            return q, i
        if self.names:
            for q, per in enumerate(self.names):
                if ref in per:
                    return q, per.index(ref)
        raise ShapeError(f"no cell named {ref!r}")


@dataclass(frozen=True)
class CohomologyOrientation:
    """Ordered Q-bases of H^q of the untwisted complex plus a sign toggle.

    Basis vectors are written in cell-index coordinates (not the ordering).
    """

    bases: tuple
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")
        object.__setattr__(self, "bases", tuple(tuple(tuple(v) for v in hq) for hq in self.bases))

    def flipped(self) -> CohomologyOrientation:
        return replace(self, sign=-self.sign)


def _assemble(x: EquivariantCellComplex, r: Representation) -> CochainComplex:
    m = r.dim
    desc = r.descriptor
    cache: dict = {}

    def rho(elem):
        if elem not in cache:
            cache[elem] = r.evaluate(elem)
        return cache[elem]

    orders = [x.degree_order(q) for q in range(len(x.cells))]
    diffs = []
    for q in range(x.top):
        rows_n, cols_n = x.cells[q + 1] * m, x.cells[q] * m
        grid = [[None] * cols_n for _ in range(rows_n)]
        zero_block = ExactMatrix.zeros(m, m, desc)
        b = x.boundaries[q]
        for bi, s in enumerate(orders[q + 1]):
            for bj, t in enumerate(orders[q]):
                a = b[t][s]
                blk = rho(a.conjugate(x.lifts[q + 1][s], invert_word(x.lifts[q][t]))) if a else zero_block
                for i in range(m):
                    for j in range(m):
                        grid[bi * m + i][bj * m + j] = blk.entries[i][j]
        diffs.append(ExactMatrix(grid, rows_n, cols_n, desc))
    return CochainComplex(tuple(k * m for k in x.cells), tuple(diffs), desc)


def assemble_twisted_cochain(x: EquivariantCellComplex, r: Representation) -> CochainComplex:
    if r.presentation != x.presentation:
        raise ValidationError("representation is for a different presentation")
    bad = failing_relation(r)
    if bad is not None:
        raise ValidationError(f"not a representation: relation {format_word(bad)} fails")
    return _assemble(x, r)


def untwisted_complex(x: EquivariantCellComplex) -> CochainComplex:
    return _assemble(x, trivial_representation(x.presentation))


def _ordered_vectors(x: EquivariantCellComplex, q: int, vectors):
    order = x.degree_order(q)
    out = []
    for v in vectors:
        if len(v) != x.cells[q]:
            raise BasisError(f"orientation vector of length {len(v)} in degree {q} ({x.cells[q]} cells)")
        out.append(tuple(const(v[i]) for i in order))
    return out


def untwisted_orientation_sign(x: EquivariantCellComplex, o: CohomologyOrientation) -> int:
    """Sign of the rational torsion of the untwisted complex relative to o's bases."""
    c = untwisted_complex(x)
    if len(o.bases) > len(x.cells):
        raise BasisError("orientation has more degrees than the complex")
    bases = [_ordered_vectors(x, q, o.bases[q]) if q < len(o.bases) else [] for q in range(len(x.cells))]
    if [len(b) for b in bases] != list(c.cohomology.dims):
        raise BasisError(f"orientation bases have sizes {[len(b) for b in bases]}, "
                         f"cohomology has dims {list(c.cohomology.dims)}")
    return sign_of_rational(torsion(c, bases))


def standard_orientation(x: EquivariantCellComplex) -> CohomologyOrientation:
    """The echelon cohomology bases of the untwisted complex, sign +1."""
    c = untwisted_complex(x)
    bases = []
    for q, hq in enumerate(c.cohomology.bases):
        order = x.degree_order(q)
        natural = []
        for v in hq:
            w = [0] * x.cells[q]
            for pos, i in enumerate(order):
                w[i] = v[pos].constant_value()
            natural.append(tuple(w))
        bases.append(natural)
    return CohomologyOrientation(tuple(bases))


def milnor_turaev_torsion(x: EquivariantCellComplex, r: Representation,
                          o: CohomologyOrientation | None = None) -> FieldElement:
    """The torsion T^{e,o}(rho) in K*, e given by the lift words of x."""
    c = assemble_twisted_cochain(x, r)
    if not c.is_acyclic():
        raise AcyclicityError(c.cohomology.dims)
    o = o or standard_orientation(x)
    s = untwisted_orientation_sign(x, o) * o.sign
    val = torsion_acyclic(c).inverse()
    return -val if (s < 0 and r.dim % 2) else val


def shift_euler(x: EquivariantCellComplex, cell, w) -> EquivariantCellComplex:
    """Copy of x with lift(cell) replaced by w * lift(cell)."""
    q, i = cell
    if not (0 <= q < len(x.cells) and 0 <= i < x.cells[q]):
        raise ShapeError(f"no cell {cell}")
    w = parse_word(w) if isinstance(w, str) else reduce_word(w)
    lifts = [list(per) for per in x.lifts]
    lifts[q][i] = word_mul(w, lifts[q][i])
    return replace(x, lifts=tuple(tuple(per) for per in lifts))


def euler_shift_sign(q: int) -> int:
    """Shifting a q-cell lift by w moves the Euler structure by this sign times [w]."""
    return (-1) ** (q + 1)


def argument_invariant(v: FieldElement, modulus: float = 2 * math.pi) -> float:
    """arg(v) reduced to [0, modulus), double precision."""
    if not v:
        raise ValueError("argument of zero")
    if not v.is_constant():
        raise ValueError("specialize the variable before taking the argument")
    a = cmath.phase(complex(v)) % modulus
    # phase of a negative real can land on modulus after reduction
    return 0.0 if math.isclose(a, modulus, rel_tol=0, abs_tol=1e-15) else a
