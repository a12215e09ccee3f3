"""Mapping tori: the algebraic mapping cone, the Wang sequence and Lefschetz zeta.

For a cellular self-map phi of N and monodromy w, the twisted complex of
the mapping torus is modelled by the cone on F = phi^# (x) w - id:

    C^q = C^q(N;V) (+) C^{q-1}(N;V),   D(x, y) = (d x, F x - d y).

The block [[d, 0], [F, -d]] squares to zero because F commutes with d.
Projecting to the first summand gives the Wang sequence

    0 -> C^{*-1}(N;V) -> cone -> C^*(N;V) -> 0

whose connecting map is F on cohomology.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import (CochainComplex, ShortExactSequence, induced_cohomology_map, pad, torsion,
                        torsion_acyclic)
from .errors import AcyclicityError, PoleError, ValidationError
from .exactfield import (QQ, ExactMatrix, FieldElement, block_matrix, det, evaluate_at,
                         evaluate_matrix, image_basis, is_unit_monomial, kernel_basis, kron, rank,
                         sign_of_rational, solve)


@dataclass(frozen=True, eq=False)
class CellularSelfMap:
    """phi^# on the untwisted cochains of N, one square matrix per degree."""

    domain: CochainComplex
    comap: tuple

    def __post_init__(self):
        c = self.domain
        maps = tuple(self.comap)
        if len(maps) != len(c.dims):
            raise ValidationError(f"need {len(c.dims)} comap matrices, got {len(maps)}")
        for q, f in enumerate(maps):
            if f.shape != (c.dim(q), c.dim(q)):
                raise ValidationError(f"comap in degree {q} must be {c.dim(q)}x{c.dim(q)}")
        for q in range(c.top):
            if maps[q + 1] @ c.d(q) != c.d(q) @ maps[q]:
                raise ValidationError(f"comap does not commute with d in degree {q}")
        object.__setattr__(self, "comap", maps)


@dataclass(frozen=True)
class MonodromyRep:
    w: ExactMatrix

    def __post_init__(self):
        if not self.w.is_square():
            raise ValidationError("monodromy must be square")
        if not det(self.w):
            raise ValidationError("monodromy must be invertible")

    @property
    def dim(self) -> int:
        return self.w.rows


def _twisted_domain(m: CellularSelfMap, rho: MonodromyRep) -> tuple[CochainComplex, list]:
    """C^*(N;V) with differential d (x) id, and F = phi^# (x) w - id per degree."""
    c, k = m.domain, rho.dim
    desc = c.descriptor.join(rho.w.descriptor)
    eye = ExactMatrix.identity(k, desc)
    dims = tuple(x * k for x in c.dims)
    diffs = tuple(kron(c.d(q), eye) for q in range(c.top))
    fs = [kron(m.comap[q], rho.w) - ExactMatrix.identity(dims[q], desc) for q in range(len(dims))]
    return CochainComplex(dims, diffs, desc), fs


def mapping_cone_complex(m: CellularSelfMap, rho: MonodromyRep) -> CochainComplex:
    tw, fs = _twisted_domain(m, rho)
    desc = tw.descriptor
    n = len(tw.dims)
    dims = [tw.dim(q) + tw.dim(q - 1) for q in range(n + 1)]
    diffs = []
    for q in range(n):
        z = ExactMatrix.zeros(tw.dim(q + 1), tw.dim(q - 1), desc)
        diffs.append(block_matrix([[tw.d(q), z], [fs[q], -tw.d(q - 1)]]))
    return CochainComplex(tuple(dims), tuple(diffs), desc)


def wang_sequence(m: CellularSelfMap, rho: MonodromyRep) -> ShortExactSequence:
    """0 -> C^{*-1}(N;V) (differential -d) -> cone -> C^*(N;V) -> 0."""
    tw, _ = _twisted_domain(m, rho)
    cone = mapping_cone_complex(m, rho)
    desc = cone.descriptor
    n = len(cone.dims)
    shifted = CochainComplex(tuple(tw.dim(q - 1) for q in range(n)),
                             tuple(-tw.d(q - 1) for q in range(n - 1)), desc)
    base = pad(tw, n)
    inject, project = [], []
    for q in range(n):
        a, b = tw.dim(q), tw.dim(q - 1)
        inject.append(block_matrix([[ExactMatrix.zeros(a, b, desc)], [ExactMatrix.identity(b, desc)]]))
        project.append(block_matrix([[ExactMatrix.identity(a, desc), ExactMatrix.zeros(a, b, desc)]]))
    return ShortExactSequence(shifted, cone, base, inject, project)


def induced_hmaps(m: CellularSelfMap) -> list[ExactMatrix]:
    """phi^* on H^q(N) in the echelon cohomology bases."""
    return induced_cohomology_map(m.domain, m.domain, m.comap)


def _p_matrices(hmaps, rho: MonodromyRep):
    desc = rho.w.descriptor
    for f in hmaps:
        desc = desc.join(f.descriptor)
    return [kron(f, rho.w) - ExactMatrix.identity(f.rows * rho.dim, desc) for f in hmaps]


def _wang_dims(ps) -> list[int]:
    """dim H^q of the cone from the Wang sequence: coker P_{q-1} + ker P_q."""
    ranks = [rank(p) for p in ps]
    out = []
    for q in range(len(ps) + 1):
        coker = ps[q - 1].rows - ranks[q - 1] if q > 0 else 0
        ker = ps[q].cols - ranks[q] if q < len(ps) else 0
        out.append(coker + ker)
    return out


def lefschetz_zeta(hmaps, rho: MonodromyRep) -> FieldElement:
    """prod_even P^k / prod_odd P^k with P^k = det(phi^*|H^k (x) w - id)."""
    ps = _p_matrices(hmaps, rho)
    values = [det(p) for p in ps]
    if not all(values):
        raise AcyclicityError(_wang_dims(ps), "some P^k vanishes; H dims: " + str(_wang_dims(ps)))
    result = FieldElement.constant(1, rho.w.descriptor)
    for k, v in enumerate(values):
        result = result * v if k % 2 == 0 else result / v
    return result


def z_phi(hmaps) -> int:
    """sum_q dim H^q(N) * dim ker(phi^* - id on H^q)."""
    total = 0
    for f in hmaps:
        if f.rows:
            total += f.rows * len(kernel_basis(f - ExactMatrix.identity(f.rows, f.descriptor)))
    return total


def _complement(vectors, n, desc):
    """Standard unit vectors (in index order) extending ``vectors`` to a basis."""
    chosen = list(vectors)
    out = []
    for j in range(n):
        e = tuple(FieldElement.constant(int(i == j), desc) for i in range(n))
        trial = chosen + [e]
        if rank(ExactMatrix.from_columns(trial, n, desc)) == len(trial):
            chosen.append(e)
            out.append(e)
    return out


def canonical_orientation(m: CellularSelfMap) -> list[list[tuple]]:
    """Rational cohomology bases of the untwisted cone, read off the Wang sequence.

    In degree q: first the classes injected from a complement of
    im(phi^* - 1) in H^{q-1}(N), then lifts of a basis of ker(phi^* - 1) on H^q(N).
    """
    c = m.domain
    desc = c.descriptor
    trivial = MonodromyRep(ExactMatrix.identity(1, desc))
    cone = mapping_cone_complex(m, trivial)
    hb = c.cohomology.bases
    hmaps = induced_hmaps(m)
    n = len(c.dims)
    bases = []
    for q in range(n + 1):
        vecs = []
        if q > 0:
            p = hmaps[q - 1] - ExactMatrix.identity(hmaps[q - 1].rows, desc)
            for coords in _complement(image_basis(p), p.rows, desc):
                z = _combine(hb[q - 1], coords, c.dim(q - 1), desc)
                vecs.append(tuple([FieldElement.constant(0, desc)] * c.dim(q)) + z)
        if q < n:
            p = hmaps[q] - ExactMatrix.identity(hmaps[q].rows, desc)
            for coords in kernel_basis(p):
                z = _combine(hb[q], coords, c.dim(q), desc)
                fz = (m.comap[q] - ExactMatrix.identity(c.dim(q), desc)).apply(z)
                y = solve(c.d(q - 1), fz) if q > 0 else ()
                vecs.append(z + tuple(y))
        bases.append(vecs)
    if [len(b) for b in bases] != list(cone.cohomology.dims):
        raise ValidationError("Wang bases do not match the cone cohomology")
    return bases


def _combine(basis, coords, length, desc):
    acc = [FieldElement.constant(0, desc)] * length
    for v, a in zip(basis, coords):
        acc = [x + a * y for x, y in zip(acc, v)]
    return tuple(acc)


def orientation_sign(m: CellularSelfMap, bases=None) -> int:
    """Sign of the rational torsion of the untwisted cone relative to ``bases``."""
    desc = m.domain.descriptor
    cone = mapping_cone_complex(m, MonodromyRep(ExactMatrix.identity(1, desc)))
    return sign_of_rational(torsion(cone, bases if bases is not None else canonical_orientation(m)))


def cone_torsion(m: CellularSelfMap, rho: MonodromyRep, bases=None, sign: int = 1) -> FieldElement:
    """1 / torsion of the cone, times (orientation sign)^dim V."""
    cone = mapping_cone_complex(m, rho)
    if not cone.is_acyclic():
        raise AcyclicityError(cone.cohomology.dims)
    val = torsion_acyclic(cone).inverse()
    s = orientation_sign(m, bases) * sign
    return -val if (s < 0 and rho.dim % 2) else val


def zeta_side(m: CellularSelfMap, rho: MonodromyRep) -> FieldElement:
    hm = induced_hmaps(m)
    z = lefschetz_zeta(hm, rho)
    return -z if (rho.dim * z_phi(hm)) % 2 else z


@dataclass(frozen=True)
class MaptorReport:
    torsion_side: FieldElement
    zeta_side: FieldElement
    ratio: FieldElement
    unit_sign: int | None
    unit_exponent: int | None
    constant_at: tuple = field(default=())
    passed: bool = False

    def unit_string(self, symbol: str = "w") -> str:
        if self.unit_sign is None:
            return "none"
        s = "+" if self.unit_sign > 0 else "-"
        if self.unit_exponent == 0:
            return s + "1"
        e = self.unit_exponent
        return f"{s}det({symbol})" + (f"^{e}" if e != 1 else "")


def _unit_of(ratio: FieldElement, dw: FieldElement, max_exp: int):
    """(sign, m) with ratio == sign * dw^m, smallest |m| first."""
    for k in range(max_exp + 1):
        for e in ((k, -k) if k else (0,)):
            p = dw ** e
            if ratio == p:
                return 1, e
            if ratio == -p:
                return -1, e
    return None, None


def default_points(descriptor, count: int = 6, seed: int = 0) -> list:
    if descriptor.variable is None:
        return []
    rng = random.Random(seed)
    pts = [2, 3, -2]
    while len(pts) < count:
        pts.append(Fraction(rng.choice([1, -1]) * rng.randint(2, 9), rng.randint(1, 5)))
    return pts[:count]


def verify_maptor(m: CellularSelfMap, rho: MonodromyRep, bases=None, sign: int = 1,
                  points=None) -> MaptorReport:
    """Compare the cone torsion with (-1)^(dim V z_phi) zeta up to a unit +-det(w)^m."""
    tors = cone_torsion(m, rho, bases, sign)
    zs = zeta_side(m, rho)
    ratio = tors / zs
    dw = det(rho.w)
    max_exp = 2 * sum(m.domain.dims) + 2
    usign, uexp = _unit_of(ratio, dw, max_exp)
    if points is None:
        points = default_points(ratio.descriptor)
    checked = []
    ok = usign is not None
    if ok:
        for p in points:
            try:
                wp = evaluate_matrix(rho.w, p)
                if not det(wp):
                    continue
                specialized = MonodromyRep(wp)
                tp = cone_torsion(m, specialized, bases, sign)
                zp = zeta_side(m, specialized)
            except (PoleError, AcyclicityError):
                continue
            unit_p = evaluate_at(dw, p) ** uexp * usign
            if tp / zp != unit_p:
                ok = False
            checked.append(p)
    return MaptorReport(tors, zs, ratio, usign, uexp, tuple(checked), ok)


def is_unit(x: FieldElement) -> bool:
    return is_unit_monomial(x) is not None


__all__ = ["CellularSelfMap", "MonodromyRep", "mapping_cone_complex", "wang_sequence",
           "induced_hmaps", "lefschetz_zeta", "z_phi", "canonical_orientation", "orientation_sign",
           "cone_torsion", "zeta_side", "MaptorReport", "verify_maptor", "QQ"]
