"""Finite cochain complexes over an exact field and their torsion.

A complex has per-degree dimensions ``dims = (k_0, ..., k_n)`` and
differentials ``diffs[q]`` of shape ``k_{q+1} x k_q``, acting on column
vectors in the standard basis.

Torsion convention used throughout::

    torsion(C, h) = (-1)^N * prod_q det[b^q | h^q | lift(b^{q+1})]^((-1)^q)

where ``b^q`` spans the coboundaries, ``h^q`` are cocycle representatives of
the cohomology basis and ``lift(b^{q+1})`` are preimages under ``d^q``.  The
coefficient of the canonical isomorphism det C -> det H (the convention in
which basis changes act by ``det(g)^((-1)^q)``) is its reciprocal, see
:func:`phi_coefficient`.
"""

from __future__ import annotations

import itertools
import random
import threading
from dataclasses import dataclass
from functools import cached_property

from .errors import (AcyclicityError, BasisError, DegeneracyError, InternalError,
                     ShapeError, ValidationError)
from .exactfield import (QQ, ExactMatrix, FieldDescriptor, FieldElement, det, hstack,
                         image_basis, kernel_basis, one, rank, rref, solve, zero)


@dataclass(frozen=True, eq=False)
class CochainComplex:
    dims: tuple
    diffs: tuple
    descriptor: FieldDescriptor = QQ

    def __post_init__(self):
        dims = tuple(int(k) for k in self.dims)
        if not dims or any(k < 0 for k in dims):
            raise ShapeError(f"bad dimension vector {dims}")
        diffs = tuple(self.diffs)
        if len(diffs) != len(dims) - 1:
            raise ShapeError(f"{len(dims)} degrees need {len(dims) - 1} differentials, got {len(diffs)}")
        desc = self.descriptor
        for q, d in enumerate(diffs):
            if d.shape != (dims[q + 1], dims[q]):
                raise ShapeError(f"d^{q} has shape {d.shape}, expected {(dims[q + 1], dims[q])}")
            desc = desc.join(d.descriptor)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "diffs", diffs)
        object.__setattr__(self, "descriptor", desc)
        for q in range(len(diffs) - 1):
            if not (diffs[q + 1] @ diffs[q]).is_zero():
                raise ValidationError(f"d^{q + 1} d^{q} != 0")

    @classmethod
    def from_lists(cls, dims, diffs, descriptor: FieldDescriptor = QQ) -> CochainComplex:
        """Build from nested lists; each differential is a list of rows (or an ExactMatrix)."""
        mats = []
        for q, rows in enumerate(diffs):
            if not isinstance(rows, ExactMatrix):
                rows = ExactMatrix(rows, dims[q + 1], dims[q], descriptor)
            mats.append(rows)
        return cls(tuple(dims), tuple(mats), descriptor)

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def dim(self, q: int) -> int:
        return self.dims[q] if 0 <= q < len(self.dims) else 0

    def d(self, q: int) -> ExactMatrix:
        """d^q : C^q -> C^{q+1}, zero outside the stored range."""
        if 0 <= q < len(self.diffs):
            return self.diffs[q]
        return ExactMatrix.zeros(self.dim(q + 1), self.dim(q), self.descriptor)

    @cached_property
    def coboundary_bases(self) -> tuple:
        return tuple(image_basis(self.d(q - 1)) for q in range(len(self.dims)))

    @cached_property
    def cocycle_bases(self) -> tuple:
        return tuple(kernel_basis(self.d(q)) for q in range(len(self.dims)))

    @cached_property
    def cohomology(self) -> Cohomology:
        return cohomology(self)

    def is_acyclic(self) -> bool:
        return not any(self.cohomology.dims)


@dataclass(frozen=True)
class Cohomology:
    dims: tuple
    bases: tuple  # per degree: list of cocycle representatives


@dataclass(frozen=True)
class TauChain:
    alphas: tuple  # per degree: sorted tuple of 0-based column indices

    def __str__(self):
        return "(" + ", ".join("{" + ",".join(str(j + 1) for j in a) + "}" for a in self.alphas) + ")"


def pad(c: CochainComplex, length: int) -> CochainComplex:
    """Extend with zero spaces up to ``length`` degrees."""
    if length < len(c.dims):
        raise ShapeError("cannot shrink a complex")
    dims = c.dims + (0,) * (length - len(c.dims))
    diffs = list(c.diffs)
    for q in range(len(c.diffs), length - 1):
        diffs.append(ExactMatrix.zeros(dims[q + 1], dims[q], c.descriptor))
    return CochainComplex(dims, tuple(diffs), c.descriptor)


def cohomology(c: CochainComplex) -> Cohomology:
    """Dimensions of H^q and echelon-deterministic cocycle representatives."""
    dims, bases = [], []
    for q in range(len(c.dims)):
        b = c.coboundary_bases[q]
        z = c.cocycle_bases[q]
        if len(z) == len(b):
            reps = []
        else:
            _, pivots = rref(ExactMatrix.from_columns(b + z, c.dims[q], c.descriptor))
            reps = [z[j - len(b)] for j in pivots if j >= len(b)]
        if len(reps) != len(z) - len(b):
            raise InternalError(f"cohomology representative search failed in degree {q}")
        dims.append(len(reps))
        bases.append(reps)
    return Cohomology(tuple(dims), tuple(bases))


def is_acyclic(c: CochainComplex) -> bool:
    return c.is_acyclic()


def _tail_sums(ks):
    out, acc = [], 0
    for k in reversed(ks):
        acc += k
        out.append(acc)
    return out[::-1]


def sign_N(c: CochainComplex) -> int:
    """Parity of N = sum_q alpha^q beta^q (tail sums of dim C and dim H)."""
    a = _tail_sums(c.dims)
    b = _tail_sums(c.cohomology.dims)
    return sum(x * y for x, y in zip(a, b)) % 2


def class_coordinates(c: CochainComplex, q: int, basis, z) -> tuple:
    """Coordinates of the class of cocycle ``z`` in the cohomology basis ``basis``."""
    b = c.coboundary_bases[q]
    m = ExactMatrix.from_columns(list(b) + list(basis), c.dim(q), c.descriptor)
    x = solve(m, z)
    return x[len(b):]


def _random_invertible(n, rng, descriptor):
    while True:
        g = ExactMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)], n, n, descriptor)
        if det(g):
            return g


def _random_vector_in_span(vectors, length, rng, descriptor):
    acc = [zero(descriptor)] * length
    for v in vectors:
        k = rng.randint(-3, 3)
        if k:
            acc = [a + k * x for a, x in zip(acc, v)]
    return tuple(acc)


def _check_bases(c: CochainComplex, h):
    hdims = c.cohomology.dims
    h = list(h) if h is not None else []
    h += [[]] * (len(c.dims) - len(h))
    if len(h) != len(c.dims):
        raise ShapeError(f"cohomology bases for {len(h)} degrees, complex has {len(c.dims)}")
    out = []
    for q, (hq, want) in enumerate(zip(h, hdims)):
        if len(hq) != want:
            raise ShapeError(f"H^{q} has dimension {want}, got {len(hq)} basis vectors")
        vecs = []
        for v in hq:
            if len(v) != c.dims[q]:
                raise ShapeError(f"basis vector of length {len(v)} in degree {q} (dim {c.dims[q]})")
            v = tuple(x if isinstance(x, FieldElement) else FieldElement.constant(x, c.descriptor)
                      for x in v)
            if any(c.d(q).apply(v)):
                raise BasisError(f"basis vector in degree {q} is not a cocycle")
            vecs.append(v)
        out.append(vecs)
    return out


def torsion(c: CochainComplex, h=None, rng: random.Random | None = None) -> FieldElement:
    """Torsion of ``c`` relative to the cohomology bases ``h``.

    ``h[q]`` is a list of cocycles whose classes form a basis of H^q.  With
    ``rng`` given, the coboundary bases, lifts and cocycle representatives
    are re-chosen at random; the result does not change.
    """
    h = _check_bases(c, h)
    desc = c.descriptor
    n = len(c.dims)
    b = [list(c.coboundary_bases[q]) for q in range(n)]
    if rng is not None:
        for q in range(n):
            if b[q]:
                g = _random_invertible(len(b[q]), rng, desc)
                bm = ExactMatrix.from_columns(b[q], c.dims[q], desc) @ g
                b[q] = bm.columns()
        h = [[tuple(x + y for x, y in zip(v, _random_vector_in_span(b[q], c.dims[q], rng, desc)))
              for v in h[q]] for q in range(n)]
    result = one(desc)
    for q in range(n):
        lifts = []
        if q + 1 < n:
            kern = c.cocycle_bases[q]
            for v in b[q + 1]:
                x = solve(c.d(q), v)
                if rng is not None:
                    x = tuple(a + r for a, r in zip(x, _random_vector_in_span(kern, c.dims[q], rng, desc)))
                lifts.append(x)
        cols = b[q] + h[q] + lifts
        if len(cols) != c.dims[q]:
            raise InternalError(f"degree {q}: {len(cols)} basis vectors for dimension {c.dims[q]}")
        if not cols:
            continue
        m = det(ExactMatrix.from_columns(cols, c.dims[q], desc))
        if not m:
            raise BasisError(f"cohomology classes in degree {q} are linearly dependent")
        result = result * m if q % 2 == 0 else result / m
    return -result if sign_N(c) else result


def phi_coefficient(c: CochainComplex, h=None) -> FieldElement:
    """Scalar of the canonical map det C -> det H on the standard bases."""
    return torsion(c, h).inverse()


def torsion_acyclic(c: CochainComplex) -> FieldElement:
    if not c.is_acyclic():
        raise AcyclicityError(c.cohomology.dims)
    return torsion(c, None)


# --------------------------------------------------------------------------
# Shapes, tau-chains and Turaev's formula


def check_shape(ks) -> tuple:
    """Validate an admissible shape vector; returns it as a tuple."""
    ks = tuple(int(k) for k in ks)
    if not ks or any(k < 0 for k in ks):
        raise ShapeError(f"bad shape {ks}")
    n = len(ks) - 1
    if sum((-1) ** i * k for i, k in enumerate(ks)) != 0:
        raise ShapeError(f"alternating sum of {ks} is not zero")
    for i in range(n):
        if sum((-1) ** (i - j) * ks[j] for j in range(i + 1)) < 0:
            raise ShapeError(f"partial alternating sum of {ks} negative at {i}")
    return ks


def is_admissible(ks) -> bool:
    try:
        check_shape(ks)
    except ShapeError:
        return False
    return True


def boundary_ranks(ks) -> list[int]:
    """r_{i+1} = rank d^i on an acyclic complex of shape ks (i = 0..n-1)."""
    out, r = [], 0
    for k in ks[:-1]:
        r = k - r
        out.append(r)
    return out


def enumerate_tau_chains(shape) -> list[TauChain]:
    ks = check_shape(shape)
    n = len(ks) - 1
    sizes = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        sizes[i] = ks[i + 1] - sizes[i + 1]
    choices = [list(itertools.combinations(range(k), s)) for k, s in zip(ks, sizes)]
    return [TauChain(tuple(a)) for a in itertools.product(*choices)]


def _diff_list(d):
    if isinstance(d, CochainComplex):
        return list(d.diffs), d.dims
    d = list(d)
    if not d:
        raise ShapeError("no differentials given")
    dims = [m.cols for m in d] + [d[-1].rows]
    for q in range(len(d) - 1):
        if d[q].rows != d[q + 1].cols:
            raise ShapeError(f"d^{q} and d^{q + 1} do not compose")
    return d, tuple(dims)


def tau_minors(d, a: TauChain) -> list[ExactMatrix]:
    diffs, dims = _diff_list(d)
    if len(a.alphas) != len(dims):
        raise ShapeError(f"tau-chain has {len(a.alphas)} entries for {len(dims)} degrees")
    out = []
    for i, m in enumerate(diffs):
        keep_rows = [r for r in range(m.rows) if r not in a.alphas[i + 1]]
        cols = list(a.alphas[i])
        if len(keep_rows) != len(cols):
            raise ShapeError(f"minor {i} is {len(keep_rows)}x{len(cols)}; not a tau-chain for this shape")
        out.append(m.submatrix(keep_rows, cols))
    return out


def unsigned_F_alpha(d, a: TauChain) -> FieldElement | None:
    """prod_i det A_i^((-1)^(i+1)) without the sign; None if some minor vanishes."""
    diffs, _ = _diff_list(d)
    desc = diffs[0].descriptor if diffs else QQ
    result = one(desc)
    for i, minor in enumerate(tau_minors(d, a)):
        v = det(minor)
        if not v:
            return None
        result = result / v if i % 2 == 0 else result * v
    return result


_EPS_CACHE: dict = {}
_EPS_LOCK = threading.Lock()
CALIBRATION_RETRIES = 1000


def calibration_sample(shape, a: TauChain, rng: random.Random) -> CochainComplex:
    """An acyclic, alpha-nondegenerate complex of the given shape."""
    from .sampling import random_acyclic_complex

    # unbounded entries: no rejection on size, and minors rarely vanish
    for _ in range(CALIBRATION_RETRIES):
        c = random_acyclic_complex(shape, rng, bound=None)
        if unsigned_F_alpha(c, a) is not None:
            return c
    raise InternalError(f"no {a}-nondegenerate sample for shape {tuple(shape)}")


def epsilon_alpha(a: TauChain, shape) -> int:
    """Sign relating Turaev's product to the torsion, calibrated on a sample.

    Write-once cache; concurrent callers compute the same value.
    """
    ks = check_shape(shape)
    key = (ks, a.alphas)
    val = _EPS_CACHE.get(key)
    if val is not None:
        return val
    rng = random.Random(repr(key))
    c = calibration_sample(ks, a, rng)
    ratio = torsion_acyclic(c) / unsigned_F_alpha(c, a)
    if ratio not in (1, -1):
        raise InternalError(f"calibration ratio {ratio} is not a sign")
    val = 1 if ratio == 1 else -1
    with _EPS_LOCK:
        return _EPS_CACHE.setdefault(key, val)


def F_alpha(d, a: TauChain) -> FieldElement:
    diffs, dims = _diff_list(d)
    u = unsigned_F_alpha(diffs, a)
    if u is None:
        raise DegeneracyError(f"complex is {a}-degenerate")
    return u * epsilon_alpha(a, dims)


def dimension_Dac(shape) -> int:
    ks = check_shape(shape)
    return sum(r * k for r, k in zip(boundary_ranks(ks), ks[1:]))


def tangent_dimension(c: CochainComplex) -> int:
    """dim L - rank of dd -> (d^{i+1} dd^i + dd^{i+1} d^i)_i at the point c."""
    ks = c.dims
    n = len(ks) - 1
    offsets, total = [], 0
    for i in range(n):
        offsets.append(total)
        total += ks[i + 1] * ks[i]
    rows = []
    for i in range(n - 1):
        d0, d1 = c.diffs[i], c.diffs[i + 1]
        for a in range(ks[i + 2]):
            for b in range(ks[i]):
                row = [0] * total
                # d^{i+1}[a, m] * dd^i[m, b]
                for m in range(ks[i + 1]):
                    row[offsets[i] + m * ks[i] + b] += d1[a, m]
                # dd^{i+1}[a, m] * d^i[m, b]
                for m in range(ks[i + 1]):
                    row[offsets[i + 1] + a * ks[i + 1] + m] += d0[m, b]
                rows.append(row)
    if not rows:
        return total
    return total - rank(ExactMatrix(rows, len(rows), total, c.descriptor))


def verify_dimension(shape, rng: random.Random | None = None, samples: int = 1) -> bool:
    from .sampling import random_acyclic_complex

    ks = check_shape(shape)
    rng = rng or random.Random(0)
    want = dimension_Dac(ks)
    return all(tangent_dimension(random_acyclic_complex(ks, rng)) == want for _ in range(samples))


# --------------------------------------------------------------------------
# Short and long exact sequences


@dataclass(frozen=True, eq=False)
class ShortExactSequence:
    """0 -> c0 --inject--> c1 --project--> c2 -> 0, one matrix per degree."""

    c0: CochainComplex
    c1: CochainComplex
    c2: CochainComplex
    inject: tuple
    project: tuple

    def __post_init__(self):
        object.__setattr__(self, "inject", tuple(self.inject))
        object.__setattr__(self, "project", tuple(self.project))

    @property
    def length(self) -> int:
        return len(self.c1.dims)

    def validate(self) -> None:
        n = self.length
        if not (len(self.c0.dims) == len(self.c2.dims) == n):
            raise ValidationError("the three complexes must have the same number of degrees")
        if len(self.inject) != n or len(self.project) != n:
            raise ValidationError("need one inject and one project matrix per degree")
        for q in range(n):
            i, p = self.inject[q], self.project[q]
            k0, k1, k2 = self.c0.dims[q], self.c1.dims[q], self.c2.dims[q]
            if i.shape != (k1, k0) or p.shape != (k2, k1):
                raise ValidationError(f"degree {q}: inject {i.shape} / project {p.shape} "
                                      f"do not fit dims {k0}, {k1}, {k2}")
            if k0 + k2 != k1:
                raise ValidationError(f"degree {q}: dimensions {k0} + {k2} != {k1}")
            if rank(i) != k0:
                raise ValidationError(f"degree {q}: inject is not injective")
            if rank(p) != k2:
                raise ValidationError(f"degree {q}: project is not surjective")
            if not (p @ i).is_zero():
                raise ValidationError(f"degree {q}: project . inject != 0")
            if q + 1 < n:
                if self.c1.d(q) @ i != self.inject[q + 1] @ self.c0.d(q):
                    raise ValidationError(f"degree {q}: inject is not a chain map")
                if self.c2.d(q) @ p != self.project[q + 1] @ self.c1.d(q):
                    raise ValidationError(f"degree {q}: project is not a chain map")


def _induced(src: CochainComplex, tgt: CochainComplex, q, f: ExactMatrix, hsrc, htgt):
    cols = [class_coordinates(tgt, q, htgt, f.apply(v)) for v in hsrc]
    return ExactMatrix.from_columns(cols, len(htgt), tgt.descriptor.join(src.descriptor))


def induced_cohomology_map(src: CochainComplex, tgt: CochainComplex, maps,
                           hsrc=None, htgt=None) -> list[ExactMatrix]:
    """Matrices of H^q(src) -> H^q(tgt) for a chain map given per degree."""
    hsrc = hsrc or src.cohomology.bases
    htgt = htgt or tgt.cohomology.bases
    return [_induced(src, tgt, q, maps[q], hsrc[q], htgt[q]) for q in range(len(src.dims))]


def connecting_maps(s: ShortExactSequence, h0, h2) -> list[ExactMatrix]:
    """delta^q : H^q(c2) -> H^{q+1}(c0) by the snake construction.

    Lift a representative through project, apply d, pull back through
    inject.  No extra sign.
    """
    n = s.length
    out = []
    for q in range(n):
        nxt = h0[q + 1] if q + 1 < n else []
        cols = []
        for z in h2[q]:
            x = solve(s.project[q], z)
            y = s.c1.d(q).apply(x)
            if q + 1 < n:
                w = solve(s.inject[q + 1], y)
                cols.append(class_coordinates(s.c0, q + 1, nxt, w))
            else:
                cols.append(())
        out.append(ExactMatrix.from_columns(cols, len(nxt), s.c1.descriptor))
    return out


def les_complex(s: ShortExactSequence, h0=None, h1=None, h2=None) -> CochainComplex:
    """The long exact cohomology sequence as an acyclic complex, H_i^q in degree 3q+i."""
    h0 = h0 or s.c0.cohomology.bases
    h1 = h1 or s.c1.cohomology.bases
    h2 = h2 or s.c2.cohomology.bases
    n = s.length
    ups = induced_cohomology_map(s.c0, s.c1, s.inject, h0, h1)
    downs = induced_cohomology_map(s.c1, s.c2, s.project, h1, h2)
    deltas = connecting_maps(s, h0, h2)
    dims, diffs = [], []
    for q in range(n):
        dims += [len(h0[q]), len(h1[q]), len(h2[q])]
        diffs += [ups[q], downs[q]]
        if q + 1 < n:
            diffs.append(deltas[q])
    desc = s.c1.descriptor.join(s.c0.descriptor).join(s.c2.descriptor)
    les = CochainComplex(tuple(dims), tuple(diffs), desc)
    if not les.is_acyclic():
        raise InternalError(f"long exact sequence is not exact: H dims {les.cohomology.dims}")
    return les


def long_exact_sequence(s: ShortExactSequence) -> CochainComplex:
    s.validate()
    return les_complex(s)


def fusion_sign_y(s: ShortExactSequence) -> int:
    s.validate()
    les = les_complex(s)
    n = s.length

    def b(c, q):
        return len(c.coboundary_bases[q]) if 0 <= q < len(c.dims) else 0

    def f(i, q):
        return len(les.coboundary_bases[3 * q + i])

    y = sign_N(s.c0) + sign_N(s.c1) + sign_N(s.c2)
    for q in range(n):
        y += f(1, q) * b(s.c2, q) + b(s.c2, q) * b(s.c0, q + 1) + f(2, q) * b(s.c0, q + 1)
    return y % 2


def psi_coefficient(s: ShortExactSequence) -> FieldElement:
    """Scalar of det C0 (x) det C2 -> det C1 on standard bases: prod det[inject | section]^((-1)^q)."""
    desc = s.c1.descriptor
    result = one(desc)
    for q in range(s.length):
        k1, k2 = s.c1.dims[q], s.c2.dims[q]
        if k1 == 0:
            continue
        section = [solve(s.project[q], [one(desc) if i == j else zero(desc) for i in range(k2)])
                   for j in range(k2)]
        m = hstack([s.inject[q], ExactMatrix.from_columns(section, k1, desc)], rows=k1)
        v = det(m)
        result = result * v if q % 2 == 0 else result / v
    return result


@dataclass(frozen=True)
class FusionReport:
    lhs: FieldElement
    rhs: FieldElement
    y: int

    @property
    def commutes(self) -> bool:
        return self.lhs == self.rhs


def fusion_report(s: ShortExactSequence, h0=None, h2=None) -> FusionReport:
    """Both paths around the fusion square, as scalars on the chosen bases.

    lhs: (-1)^y psi followed by phi_{C1};  rhs: phi_{C0} (x) phi_{C2} followed by phi_H.
    """
    s.validate()
    h0 = h0 or s.c0.cohomology.bases
    h2 = h2 or s.c2.cohomology.bases
    h1 = s.c1.cohomology.bases
    y = fusion_sign_y(s)
    lhs = psi_coefficient(s) * phi_coefficient(s.c1, h1)
    if y:
        lhs = -lhs
    les = les_complex(s, h0, h1, h2)
    rhs = phi_coefficient(s.c0, h0) * phi_coefficient(s.c2, h2) * phi_coefficient(les)
    return FusionReport(lhs, rhs, y)


def fusion_check(s: ShortExactSequence, h0=None, h2=None) -> bool:
    return fusion_report(s, h0, h2).commutes
