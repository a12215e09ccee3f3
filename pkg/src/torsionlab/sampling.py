"""Random generators for complexes and short exact sequences.

Complexes are built as d^i = P_{i+1} E_i P_i^{-1} with E_i in normal form and
P_i unimodular integer matrices (products of a few elementary moves), so the
differentials stay integral; samples with an entry outside [-bound, bound]
are rejected.
"""

from __future__ import annotations

import random

from .complexes import CochainComplex, ShortExactSequence, boundary_ranks, check_shape
from .errors import InternalError
from .exactfield import QQ, ExactMatrix, kernel_basis

MAX_TRIES = 1000


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(a, b, inner):
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def random_unimodular(n: int, rng: random.Random, moves: int | None = None):
    """(P, P^{-1}) as integer lists, built from elementary moves."""
    p, pinv = _identity(n), _identity(n)
    if n == 0:
        return p, pinv
    if moves is None:
        moves = rng.randint(n, 3 * n)
    for _ in range(moves):
        kind = rng.random()
        if n > 1 and kind < 0.7:
            a, b = rng.sample(range(n), 2)
            c = rng.choice((-1, 1, -2, 2)) if kind < 0.15 else rng.choice((-1, 1))
            # P <- P (I + c e_ab): column b += c * column a ; P^-1 <- (I - c e_ab) P^-1
            for row in p:
                row[b] += c * row[a]
            pinv[a] = [x - c * y for x, y in zip(pinv[a], pinv[b])]
        elif n > 1 and kind < 0.85:
            a, b = rng.sample(range(n), 2)
            for row in p:
                row[a], row[b] = row[b], row[a]
            pinv[a], pinv[b] = pinv[b], pinv[a]
        else:
            a = rng.randrange(n)
            for row in p:
                row[a] = -row[a]
            pinv[a] = [-x for x in pinv[a]]
    return p, pinv


def random_complex_lists(dims, ranks, rng: random.Random, bound: int | None = 3):
    """Integer differentials of a complex with rank d^i = ranks[i]."""
    dims = list(dims)
    n = len(dims) - 1
    for _ in range(MAX_TRIES):
        ps = [random_unimodular(k, rng) for k in dims]
        diffs, ok = [], True
        prev = 0
        for i in range(n):
            r = ranks[i]
            k0, k1 = dims[i], dims[i + 1]
            # normal form: coordinates prev..prev+r of C^i map onto 0..r of C^{i+1}
            e = [[0] * k0 for _ in range(k1)]
            for j in range(r):
                e[j][prev + j] = 1
            d = _matmul(_matmul(ps[i + 1][0], e, k1), ps[i][1], k0)
            if bound is not None and any(abs(x) > bound for row in d for x in row):
                ok = False
                break
            diffs.append(d)
            prev = r
        if ok:
            return diffs
    raise InternalError(f"no sample within bound {bound} for dims {dims} after {MAX_TRIES} tries")


def random_acyclic_complex(shape, rng: random.Random, bound: int | None = 3,
                           descriptor=QQ) -> CochainComplex:
    ks = check_shape(shape)
    diffs = random_complex_lists(ks, boundary_ranks(ks), rng, bound)
    return CochainComplex.from_lists(ks, diffs, descriptor)


def random_ranks(dims, rng: random.Random) -> list[int]:
    out, prev = [], 0
    for i in range(len(dims) - 1):
        r = rng.randint(0, min(dims[i] - prev, dims[i + 1]))
        out.append(r)
        prev = r
    return out


def random_complex(dims, rng: random.Random, bound: int | None = 3, descriptor=QQ) -> CochainComplex:
    """A random complex with random ranks (cohomology usually nonzero)."""
    dims = list(dims)
    diffs = random_complex_lists(dims, random_ranks(dims, rng), rng, bound)
    return CochainComplex.from_lists(dims, diffs, descriptor)


def random_shape(rng: random.Random, max_degree: int = 4, max_dim: int = 5) -> tuple:
    """A random admissible shape with n <= max_degree and k_i <= max_dim."""
    while True:
        n = rng.randint(1, max_degree)
        ks, r = [], 0  # r: rank of the incoming differential
        for i in range(n):
            out = rng.randint(0, max_dim - r)
            ks.append(r + out)
            r = out
        if r > max_dim:
            continue
        ks.append(r)
        if any(ks):
            return check_shape(ks)


def _anti_chain_maps(c0: CochainComplex, c2: CochainComplex, rng: random.Random):
    """Random h^q : C2^q -> C0^{q+1} with d0 h^q + h^{q+1} d2 = 0 (integer entries)."""
    n = len(c0.dims)
    shapes = [(c0.dim(q + 1), c2.dim(q)) for q in range(n)]
    offsets, total = [], 0
    for r, c in shapes:
        offsets.append(total)
        total += r * c
    if total == 0:
        return [ExactMatrix.zeros(r, c) for r, c in shapes]
    rows = []
    for q in range(n - 1):
        d0, d2 = c0.d(q + 1), c2.d(q)
        for a in range(c0.dim(q + 2)):
            for b in range(c2.dim(q)):
                row = [0] * total
                for m in range(c0.dim(q + 1)):  # d0^{q+1}[a,m] h^q[m,b]
                    row[offsets[q] + m * shapes[q][1] + b] += d0[a, m]
                for m in range(c2.dim(q + 1)):  # h^{q+1}[a,m] d2^q[m,b]
                    row[offsets[q + 1] + a * shapes[q + 1][1] + m] += d2[m, b]
                rows.append(row)
    if rows:
        basis = kernel_basis(ExactMatrix(rows, len(rows), total))
    else:
        basis = [tuple(int(i == j) for i in range(total)) for j in range(total)]
    vec = [0] * total
    for v in basis:
        k = rng.randint(-2, 2)
        vec = [x + k * y for x, y in zip(vec, v)]
    out = []
    for q, (r, c) in enumerate(shapes):
        flat = vec[offsets[q]:offsets[q] + r * c]
        out.append(ExactMatrix.from_flat(r, c, flat))
    return out


def _block_upper(d0, h, d2):
    k0r, k0c = d0.shape
    k2r, k2c = d2.shape
    rows = []
    for i in range(k0r):
        rows.append(list(d0.entries[i]) + list(h.entries[i]))
    for i in range(k2r):
        rows.append([0] * k0c + list(d2.entries[i]))
    return ExactMatrix(rows, k0r + k2r, k0c + k2c)


def random_split_sequence(rng: random.Random, length: int | None = None, max_dim: int = 3,
                          twist: bool = True, mix: bool = True,
                          c0: CochainComplex | None = None,
                          c2: CochainComplex | None = None) -> ShortExactSequence:
    """C1 = C0 (+) C2 with an upper-triangular differential [[d0, h], [0, d2]].

    ``twist`` picks a random nonzero off-diagonal anti-chain map h; ``mix``
    conjugates C1 by a random unimodular change of basis per degree.
    """
    if length is None:
        length = c0.top + 1 if c0 is not None else (c2.top + 1 if c2 is not None else rng.randint(1, 4))
    if c0 is None:
        c0 = random_complex([rng.randint(0, max_dim) for _ in range(length)], rng)
    if c2 is None:
        c2 = random_complex([rng.randint(0, max_dim) for _ in range(length)], rng)
    hs = _anti_chain_maps(c0, c2, rng) if twist else [
        ExactMatrix.zeros(c0.dim(q + 1), c2.dim(q)) for q in range(length)]
    dims = [a + b for a, b in zip(c0.dims, c2.dims)]
    diffs = [_block_upper(c0.d(q), hs[q], c2.d(q)) for q in range(length - 1)]
    inject = [ExactMatrix([[int(i == j) for j in range(c0.dims[q])] for i in range(dims[q])],
                          dims[q], c0.dims[q]) for q in range(length)]
    project = [ExactMatrix([[int(j == i + c0.dims[q]) for j in range(dims[q])] for i in range(c2.dims[q])],
                           c2.dims[q], dims[q]) for q in range(length)]
    if mix:
        gs = [random_unimodular(k, rng) for k in dims]
        g = [ExactMatrix(p, k, k) for (p, _), k in zip(gs, dims)]
        ginv = [ExactMatrix(pi, k, k) for (_, pi), k in zip(gs, dims)]
        diffs = [g[q + 1] @ diffs[q] @ ginv[q] for q in range(length - 1)]
        inject = [g[q] @ inject[q] for q in range(length)]
        project = [project[q] @ ginv[q] for q in range(length)]
    c1 = CochainComplex(tuple(dims), tuple(diffs))
    return ShortExactSequence(c0, c1, c2, inject, project)
