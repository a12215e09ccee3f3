"""Exact arithmetic over Q, Q(i) and one-variable rational function fields.

Values are :class:`FieldElement` instances holding a numerator and a monic
denominator polynomial (coefficient tuples, lowest degree first) over the
base field.  Base coefficients are :class:`fractions.Fraction` for real
values and :class:`Gaussian` when the imaginary part is nonzero, so that
structurally equal tuples mean equal values.

Linear algebra (determinant, rank, kernel/image bases, solving) works on
:class:`ExactMatrix`.  Determinant and rank use fraction-free (Bareiss)
elimination over Z or over the polynomial ring; the echelon-form routines
use plain Gauss-Jordan elimination over the field.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import NoSolutionError, PoleError, ShapeError

RATIONALS = "rationals"
GAUSSIAN_RATIONALS = "gaussian-rationals"
_BASES = (RATIONALS, GAUSSIAN_RATIONALS)


@dataclass(frozen=True)
class FieldDescriptor:
    """Which field a value lives in: a base field plus at most one variable."""

    base: str = RATIONALS
    variable: str | None = None

    def __post_init__(self):
        if self.base not in _BASES:
            raise ValueError(f"unknown base field {self.base!r}")
        if self.variable is not None and not re.fullmatch(r"[A-Za-z_]\w*", self.variable):
            raise ValueError(f"bad variable name {self.variable!r}")
        if self.variable == "i":
            raise ValueError("'i' is reserved for the imaginary unit")

    def join(self, other: FieldDescriptor) -> FieldDescriptor:
        if other is self or other == self:
            return self
        if self.variable and other.variable and self.variable != other.variable:
            raise ValueError(f"cannot mix variables {self.variable!r} and {other.variable!r}")
        base = GAUSSIAN_RATIONALS if GAUSSIAN_RATIONALS in (self.base, other.base) else RATIONALS
        return FieldDescriptor(base, self.variable or other.variable)

    @property
    def constants(self) -> FieldDescriptor:
        return FieldDescriptor(self.base) if self.variable else self

    def __str__(self):
        b = "QQ" if self.base == RATIONALS else "QQ(i)"
        return f"{b}({self.variable})" if self.variable else b


QQ = FieldDescriptor()
QQI = FieldDescriptor(GAUSSIAN_RATIONALS)


# --------------------------------------------------------------------------
# Gaussian rationals


def _gauss(re_, im):
    # canonical coefficient: real values are always plain Fractions
    return re_ if im == 0 else Gaussian(re_, im)


class Gaussian:
    """a + b*i with rational a, b; only built when b != 0."""

    __slots__ = ("re", "im")

    def __init__(self, re_=0, im=0):
        self.re = Fraction(re_)
        self.im = Fraction(im)

    @staticmethod
    def _parts(x):
        if isinstance(x, Gaussian):
            return x.re, x.im
        if isinstance(x, (int, Fraction)):
            return Fraction(x), Fraction(0)
        return None

    def __add__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return _gauss(self.re + o[0], self.im + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return _gauss(self.re - o[0], self.im - o[1])

    def __rsub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return _gauss(o[0] - self.re, o[1] - self.im)

    def __mul__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = o
        return _gauss(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        c, d = o
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        a, b = self.re, self.im
        return _gauss((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return Gaussian(*o) / self

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __eq__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return self.re == o[0] and self.im == o[1]

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __bool__(self):
        return bool(self.re or self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return Gaussian(self.re, -self.im)

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"


def is_gaussian(c) -> bool:
    return isinstance(c, Gaussian)


# --------------------------------------------------------------------------
# Polynomials: tuples of coefficients, lowest degree first, no trailing zeros.

_ZERO = Fraction(0)
_ONE = Fraction(1)
P_ONE = (_ONE,)


def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _trim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _psub(a, b):
    return _padd(a, _pneg(b))


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        c = a[0]
        return _trim(c * x for x in b)
    if len(b) == 1:
        c = b[0]
        return _trim(x * c for x in a)
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _pscale(a, c):
    return _trim(x * c for x in a)


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    rem = list(a)
    lc = b[-1]
    q = [_ZERO] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + len(b) - 1] / lc
        q[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] = rem[k + j] - c * y
    return _trim(q), _trim(rem[: len(b) - 1])


def _pexactdiv(a, b):
    q, r = _pdivmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def _pmonic(a):
    if not a or a[-1] == 1:
        return a
    lc = a[-1]
    return tuple(c / lc for c in a)


def _pgcd(a, b):
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a)


def _peval(a, x):
    acc = _ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc



def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def rational_roots(p) -> tuple[list, tuple]:
    """Rational roots of a polynomial with multiplicities, plus the residual factor.

    Gaussian coefficients are handled through p * conj(p), whose rational
    roots contain those of p.
    """
    p = _trim(tuple(p))
    if not p:
        raise ValueError("the zero polynomial has every root")
    probe = p
    if any(isinstance(c, Gaussian) for c in p):
        conj = tuple(c.conjugate() if isinstance(c, Gaussian) else c for c in p)
        probe = tuple(Fraction(c) if not isinstance(c, Gaussian) else c.re for c in _pmul(p, conj))
    scale = lcm(*(Fraction(c).denominator for c in probe))
    ints = [int(Fraction(c) * scale) for c in probe]
    candidates = set()
    if ints[0] == 0:
        candidates.add(Fraction(0))
    nz = next(i for i, c in enumerate(ints) if c)
    low, high = ints[nz], ints[-1]
    for a in _divisors(low):
        for b in _divisors(high):
            candidates.update((Fraction(a, b), Fraction(-a, b)))
    roots = []
    for r in sorted(candidates):
        mult = 0
        while len(p) > 1 and not _peval(p, r):
            p = _pexactdiv(p, (-r, _ONE))
            mult += 1
        if mult:
            roots.append((r, mult))
    return roots, p

def _coef(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Gaussian):
        return _gauss(x.re, x.im)
    raise TypeError(f"not an exact coefficient: {x!r}")


# --------------------------------------------------------------------------
# Field elements


class FieldElement:
    """An element num/den of the field described by ``descriptor``.

    Invariants: den is nonzero and monic, gcd(num, den) = 1, and constants
    have den == (1,).  Construct through :func:`normalize` or the helpers.
    """

    __slots__ = ("num", "den", "descriptor")

    def __init__(self, num, den, descriptor):
        self.num = num
        self.den = den
        self.descriptor = descriptor

    # constructors
    @classmethod
    def constant(cls, c, descriptor: FieldDescriptor = QQ) -> FieldElement:
        c = _coef(c)
        if isinstance(c, Gaussian):
            descriptor = descriptor.join(QQI)
        return cls((c,) if c else (), P_ONE, descriptor)

    @classmethod
    def gen(cls, descriptor: FieldDescriptor) -> FieldElement:
        if descriptor.variable is None:
            raise ValueError("field has no variable")
        return cls((_ZERO, _ONE), P_ONE, descriptor)

    @classmethod
    def polynomial(cls, coeffs, descriptor: FieldDescriptor) -> FieldElement:
        return normalize(coeffs, P_ONE, descriptor)

    # predicates
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0] if self.num else _ZERO

    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    # coercion
    def _lift(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction, Gaussian)):
            return FieldElement.constant(other, self.descriptor)
        return None

    def _desc(self, other):
        d = self.descriptor
        return d if other.descriptor is d else d.join(other.descriptor)

    # arithmetic
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        desc = self._desc(o)
        if self.den == P_ONE and o.den == P_ONE:
            return FieldElement(_padd(self.num, o.num), P_ONE, desc)
        if self.den == o.den:
            return normalize(_padd(self.num, o.num), self.den, desc)
        g = _pgcd(self.den, o.den)
        b1 = _pexactdiv(self.den, g)
        d1 = _pexactdiv(o.den, g)
        num = _padd(_pmul(self.num, d1), _pmul(o.num, b1))
        return normalize(num, _pmul(self.den, d1), desc)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(_pneg(self.num), self.den, self.descriptor)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        desc = self._desc(o)
        if self.den == P_ONE and o.den == P_ONE:
            return FieldElement(_pmul(self.num, o.num), P_ONE, desc)
        if not self.num or not o.num:
            return FieldElement((), P_ONE, desc)
        # cross-cancel keeps the result coprime without a full gcd of products
        g1 = _pgcd(self.num, o.den)
        g2 = _pgcd(o.num, self.den)
        n = _pmul(_pexactdiv(self.num, g1), _pexactdiv(o.num, g2))
        d = _pmul(_pexactdiv(self.den, g2), _pexactdiv(o.den, g1))
        return _monic_den(n, d, desc)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return _monic_den(self.den, self.num, self.descriptor)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = FieldElement(P_ONE, P_ONE, self.descriptor)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, FieldElement) else other
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den == P_ONE and len(self.num) <= 1:
            return hash(self.num[0] if self.num else 0)
        return hash((self.num, self.den))

    def __repr__(self):
        return f"FieldElement({to_literal(self)!r}, {self.descriptor})"

    def __str__(self):
        return pretty(self)

    def __complex__(self):
        return complex(_to_complex(self.constant_value()))

    def degree(self) -> int:
        """deg(num) - deg(den); the valuation at infinity with sign flipped."""
        if not self.num:
            raise ValueError("degree of zero")
        return len(self.num) - len(self.den)


def _monic_den(num, den, desc):
    if not den:
        raise ZeroDivisionError("zero denominator")
    lc = den[-1]
    if lc != 1:
        num = tuple(c / lc for c in num)
        den = tuple(c / lc for c in den)
    return FieldElement(num, den, desc)


def normalize(num, den=P_ONE, descriptor: FieldDescriptor | None = None) -> FieldElement:
    """Canonical num/den: coprime, monic denominator, den == (1,) for constants."""
    num = _trim(_coef(c) for c in num)
    den = _trim(_coef(c) for c in den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if descriptor is None:
        descriptor = QQ
    if any(isinstance(c, Gaussian) for c in num + den):
        descriptor = descriptor.join(QQI)
    if (len(num) > 1 or len(den) > 1) and descriptor.variable is None:
        raise ValueError(f"non-constant polynomial in a field without a variable: {descriptor}")
    if not num:
        return FieldElement((), P_ONE, descriptor)
    if len(den) > 1:
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pexactdiv(num, g)
            den = _pexactdiv(den, g)
    return _monic_den(num, den, descriptor)


def const(c, descriptor: FieldDescriptor = QQ) -> FieldElement:
    if isinstance(c, FieldElement):
        return c
    return FieldElement.constant(c, descriptor)


def zero(descriptor: FieldDescriptor = QQ) -> FieldElement:
    return FieldElement((), P_ONE, descriptor)


def one(descriptor: FieldDescriptor = QQ) -> FieldElement:
    return FieldElement(P_ONE, P_ONE, descriptor)


def evaluate_at(x: FieldElement, point) -> FieldElement:
    """Substitute ``point`` (a base-field value) for the variable."""
    point = _coef(point.constant_value() if isinstance(point, FieldElement) else point)
    desc = x.descriptor.constants
    if isinstance(point, Gaussian):
        desc = desc.join(QQI)
    d = _peval(x.den, point)
    if not d:
        raise PoleError(point)
    return FieldElement.constant(_peval(x.num, point) / d, desc)


def _to_complex(c) -> complex:
    if isinstance(c, Gaussian):
        return complex(c)
    return complex(float(c))


def sign_of_rational(x: FieldElement) -> int:
    c = x.constant_value()
    if isinstance(c, Gaussian) or not c:
        raise ValueError(f"{x} has no sign")
    return 1 if c > 0 else -1


def is_unit_monomial(x: FieldElement) -> tuple[int, int] | None:
    """Return (sign, m) if x == sign * var**m with sign = +-1, else None."""
    if not x.num:
        return None
    n, d = x.num, x.den
    if sum(1 for c in n if c) != 1 or sum(1 for c in d if c) != 1:
        return None
    cn, cd = n[-1], d[-1]
    ratio = cn / cd
    if ratio not in (1, -1):
        return None
    return (1 if ratio == 1 else -1), (len(n) - 1) - (len(d) - 1)


# --------------------------------------------------------------------------
# Literals

_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(_RAT)


def _parse_rational(s: str) -> Fraction:
    if not _RAT_RE.fullmatch(s):
        raise ValueError(f"bad rational literal {s!r}")
    return Fraction(s)


def parse_constant(s: str, descriptor: FieldDescriptor = QQI):
    """Parse "p/q" or a Gaussian literal "a+b*i" into a base coefficient."""
    s = s.strip().replace(" ", "")
    if not s:
        raise ValueError("empty literal")
    if s.endswith("i"):
        if descriptor.base != GAUSSIAN_RATIONALS:
            raise ValueError(f"Gaussian literal {s!r} in field {descriptor}")
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut > 0 and body[cut - 1] != "/":
            re_s, im_s = body[:cut], body[cut:]
        else:
            re_s, im_s = "0", body
        if im_s.endswith("*"):
            im_s = im_s[:-1]
        if im_s in ("", "+"):
            im = _ONE
        elif im_s == "-":
            im = -_ONE
        else:
            im = _parse_rational(im_s)
        return _gauss(_parse_rational(re_s), im)
    return _parse_rational(s)


def _split_top(s: str, seps: str = ",") -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch in "[{(":
            depth += 1
        elif ch in "]})":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced brackets in {s!r}")
        if ch in seps and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ValueError(f"unbalanced brackets in {s!r}")
    parts.append("".join(cur).strip())
    return parts


def _parse_poly(s: str, descriptor: FieldDescriptor):
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"bad polynomial literal {s!r}")
    body = s[1:-1].strip()
    if not body:
        return ()
    return tuple(parse_constant(c, descriptor) for c in _split_top(body))


def parse_element(s: str, descriptor: FieldDescriptor) -> FieldElement:
    """Parse a constant, a polynomial "[c0, c1, ...]" or "[num]/[den]"."""
    s = s.strip()
    if s.startswith("["):
        close = s.index("]")
        num = _parse_poly(s[: close + 1], descriptor)
        rest = s[close + 1 :].strip()
        if rest:
            if not rest.startswith("/"):
                raise ValueError(f"bad rational function literal {s!r}")
            den = _parse_poly(rest[1:], descriptor)
        else:
            den = P_ONE
        if not den:
            raise ZeroDivisionError(f"zero denominator in {s!r}")
        if (len(num) > 1 or len(den) > 1) and descriptor.variable is None:
            raise ValueError(f"polynomial literal {s!r} but the field has no variable")
        return normalize(num, den, descriptor)
    return FieldElement.constant(parse_constant(s, descriptor), descriptor)


def format_constant(c) -> str:
    if isinstance(c, Gaussian):
        im = c.im
        if c.re == 0:
            return f"{im}*i"
        return f"{c.re}{'+' if im > 0 else '-'}{abs(im)}*i"
    return str(c)


def _format_poly(p) -> str:
    return "[" + ", ".join(format_constant(c) for c in p) + "]" if p else "[0]"


def to_literal(x: FieldElement) -> str:
    if x.is_constant():
        return format_constant(x.constant_value())
    if x.den == P_ONE:
        return _format_poly(x.num)
    return _format_poly(x.num) + "/" + _format_poly(x.den)


def _pretty_poly(p, var) -> str:
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        if isinstance(c, Gaussian):
            cs, neg = f"({format_constant(c)})", False
        else:
            cs, neg = str(abs(c)), c < 0
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and cs == "1":
            body = mono
        elif mono:
            body = f"{cs}*{mono}"
        else:
            body = cs
        terms.append((neg, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] else "") + terms[0][1]
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


def pretty(x: FieldElement) -> str:
    var = x.descriptor.variable or "t"
    n = _pretty_poly(x.num, var)
    if x.den == P_ONE:
        return n
    d = _pretty_poly(x.den, var)
    if sum(1 for c in x.den if c) > 1:
        d = f"({d})"
    if len(x.num) > 1 or (x.num and isinstance(x.num[0], Gaussian)):
        n = f"({n})"
    return f"{n}/{d}"


# --------------------------------------------------------------------------
# Matrices


class ExactMatrix:
    """Immutable rows x cols grid of FieldElements over one descriptor."""

    __slots__ = ("rows", "cols", "entries", "descriptor")

    def __init__(self, data, rows: int | None = None, cols: int | None = None,
                 descriptor: FieldDescriptor | None = None):
        data = [list(r) for r in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ShapeError(f"ragged or mis-sized matrix data for {rows}x{cols}")
        desc = descriptor or QQ
        for r in data:
            for x in r:
                if isinstance(x, FieldElement):
                    desc = desc.join(x.descriptor)
                elif isinstance(x, Gaussian):
                    desc = desc.join(QQI)
        self.rows = rows
        self.cols = cols
        self.descriptor = desc
        self.entries = tuple(
            tuple(_in_field(x, desc) for x in r) for r in data
        )

    @classmethod
    def _raw(cls, entries, rows, cols, descriptor):
        m = cls.__new__(cls)
        m.rows, m.cols, m.entries, m.descriptor = rows, cols, entries, descriptor
        return m

    @classmethod
    def zeros(cls, rows, cols, descriptor=QQ):
        z = zero(descriptor)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), rows, cols, descriptor)

    @classmethod
    def identity(cls, n, descriptor=QQ):
        z, o = zero(descriptor), one(descriptor)
        return cls._raw(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)),
                        n, n, descriptor)

    @classmethod
    def from_flat(cls, rows, cols, flat, descriptor=None):
        flat = list(flat)
        if len(flat) != rows * cols:
            raise ShapeError(f"expected {rows * cols} entries for {rows}x{cols}, got {len(flat)}")
        return cls([flat[i * cols:(i + 1) * cols] for i in range(rows)], rows, cols, descriptor)

    @classmethod
    def from_columns(cls, columns, rows, descriptor=None):
        columns = list(columns)
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns), descriptor)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self):
        return self.rows, self.cols

    @property
    def T(self) -> ExactMatrix:
        if self.rows == 0:
            return ExactMatrix.zeros(self.cols, 0, self.descriptor)
        return ExactMatrix._raw(tuple(zip(*self.entries)), self.cols, self.rows, self.descriptor)

    def columns(self) -> list[tuple]:
        return [tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)]

    def flat(self) -> list[FieldElement]:
        return [x for r in self.entries for x in r]

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def _join(self, other):
        return self.descriptor.join(other.descriptor)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        desc = self._join(other)
        z = zero(desc)
        ocols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for r in self.entries:
            row = []
            for c in ocols:
                acc = z
                for a, b in zip(r, c):
                    if a.num and b.num:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return ExactMatrix._raw(tuple(out), self.rows, other.cols, desc)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                      for r, s in zip(self.entries, other.entries)),
                                self.rows, self.cols, self._join(other))

    def __neg__(self):
        return ExactMatrix._raw(tuple(tuple(-a for a in r) for r in self.entries),
                                self.rows, self.cols, self.descriptor)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> ExactMatrix:
        c = const(c, self.descriptor)
        return ExactMatrix([[a * c for a in r] for r in self.entries], self.rows, self.cols,
                           self.descriptor.join(c.descriptor))

    def apply(self, v) -> tuple:
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        z = zero(self.descriptor)
        out = []
        for r in self.entries:
            acc = z
            for a, b in zip(r, v):
                if a.num and b.num:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def submatrix(self, rows, cols) -> ExactMatrix:
        rows, cols = list(rows), list(cols)
        return ExactMatrix._raw(tuple(tuple(self.entries[i][j] for j in cols) for i in rows),
                                len(rows), len(cols), self.descriptor)

    def map(self, fn) -> ExactMatrix:
        return ExactMatrix([[fn(x) for x in r] for r in self.entries], self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(to_literal(x) for x in r) for r in self.entries)
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"


def _in_field(x, desc):
    if isinstance(x, FieldElement):
        if x.descriptor is desc:
            return x
        return FieldElement(x.num, x.den, desc)
    return FieldElement.constant(x, desc)


def hstack(blocks, rows=None, descriptor=None) -> ExactMatrix:
    blocks = list(blocks)
    if rows is None:
        rows = blocks[0].rows
    for b in blocks:
        if b.rows != rows:
            raise ShapeError("hstack row mismatch")
    data = [[x for b in blocks for x in b.entries[i]] for i in range(rows)]
    return ExactMatrix(data, rows, sum(b.cols for b in blocks), descriptor)


def vstack(blocks, cols=None, descriptor=None) -> ExactMatrix:
    blocks = list(blocks)
    if cols is None:
        cols = blocks[0].cols
    for b in blocks:
        if b.cols != cols:
            raise ShapeError("vstack column mismatch")
    data = [list(r) for b in blocks for r in b.entries]
    return ExactMatrix(data, sum(b.rows for b in blocks), cols, descriptor)


def block_matrix(grid) -> ExactMatrix:
    """Assemble from a 2-D grid of ExactMatrix blocks (row heights/col widths must agree)."""
    return vstack([hstack(row) for row in grid])


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    rows, cols = a.rows * b.rows, a.cols * b.cols
    data = [[a.entries[i // b.rows][j // b.cols] * b.entries[i % b.rows][j % b.cols]
             for j in range(cols)] for i in range(rows)]
    return ExactMatrix(data, rows, cols, a.descriptor.join(b.descriptor))


# --------------------------------------------------------------------------
# Elimination kernels


def _rational_grid(m: ExactMatrix):
    """Entries as Fractions when every entry is a rational constant, else None."""
    out = []
    for r in m.entries:
        row = []
        for x in r:
            if x.den != P_ONE or len(x.num) > 1:
                return None
            c = x.num[0] if x.num else _ZERO
            if isinstance(c, Gaussian):
                return None
            row.append(c)
        out.append(row)
    return out


def _integer_rows(grid):
    """Clear denominators row by row; returns (int rows, product of multipliers)."""
    scale = 1
    rows = []
    for r in grid:
        den = lcm(*(c.denominator for c in r)) if r else 1
        scale *= den
        rows.append([int(c * den) for c in r])
    return rows, scale


def _polynomial_rows(m: ExactMatrix):
    """Clear polynomial denominators row by row; returns (poly rows, product poly)."""
    scale = P_ONE
    rows = []
    for r in m.entries:
        den = P_ONE
        for x in r:
            if x.den != P_ONE and x.den != den:
                g = _pgcd(den, x.den)
                den = _pmul(den, _pexactdiv(x.den, g))
        scale = _pmul(scale, den)
        rows.append([_pmul(x.num, _pexactdiv(den, x.den)) if x.num else () for x in r])
    return rows, scale


class _IntRing:
    zero = 0

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def div(a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("inexact integer division in Bareiss step")
        return q


class _PolyRing:
    zero = ()
    mul = staticmethod(_pmul)
    sub = staticmethod(_psub)
    div = staticmethod(_pexactdiv)


def _bareiss_forward(a, ring, square=False):
    """Fraction-free forward elimination in place.

    Returns (pivot columns, swap parity, last pivot).  Every division is
    exact (Sylvester's identity), so intermediate entries are minors of the
    input and stay small.
    """
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    mul, sub, div = ring.mul, ring.sub, ring.div
    prev = None
    r = 0
    swaps = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            if square:
                return pivots, swaps, ring.zero
            continue
        if p != r:
            a[p], a[r] = a[r], a[p]
            swaps += 1
        piv = a[r][c]
        for i in range(r + 1, nrows):
            lead = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, ncols):
                v = sub(mul(piv, row_i[j]), mul(lead, row_r[j]))
                row_i[j] = div(v, prev) if prev is not None else v
            row_i[c] = ring.zero
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, swaps, prev


def det(m: ExactMatrix) -> FieldElement:
    """Exact determinant via fraction-free elimination."""
    if m.rows != m.cols:
        raise ShapeError(f"determinant of non-square {m.shape} matrix")
    desc = m.descriptor
    n = m.rows
    if n == 0:
        return one(desc)
    grid = _rational_grid(m)
    if grid is not None:
        a, scale = _integer_rows(grid)
        pivots, swaps, last = _bareiss_forward(a, _IntRing, square=True)
        if len(pivots) < n:
            return zero(desc)
        val = Fraction(last * (-1 if swaps % 2 else 1), scale)
        return FieldElement.constant(val, desc)
    a, scale = _polynomial_rows(m)
    pivots, swaps, last = _bareiss_forward(a, _PolyRing, square=True)
    if len(pivots) < n:
        return zero(desc)
    if swaps % 2:
        last = _pneg(last)
    return normalize(last, scale, desc)


def det_gauss(m: ExactMatrix) -> FieldElement:
    """Determinant by plain Gaussian elimination over the field (benchmark baseline)."""
    if m.rows != m.cols:
        raise ShapeError(f"determinant of non-square {m.shape} matrix")
    n = m.rows
    a = [list(r) for r in m.entries]
    result = one(m.descriptor)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return zero(m.descriptor)
        if p != c:
            a[p], a[c] = a[c], a[p]
            result = -result
        piv = a[c][c]
        result = result * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            f = a[i][c] * inv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def rank(m: ExactMatrix) -> int:
    """Exact rank over the field (over F(t) this is the generic rank)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    grid = _rational_grid(m)
    if grid is not None:
        a, _ = _integer_rows(grid)
        return len(_bareiss_forward(a, _IntRing)[0])
    a, _ = _polynomial_rows(m)
    return len(_bareiss_forward(a, _PolyRing)[0])


def _rref(a, ncols):
    """Reduced row echelon form in place over a field; returns pivot columns.

    Pivot choice: first nonzero entry scanning top-to-bottom in each column.
    """
    nrows = len(a)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[p], a[r] = a[r], a[p]
        inv = 1 / a[r][c]
        a[r] = [x * inv if x else x for x in a[r]]
        row_r = a[r]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], row_r)]
        pivots.append(c)
        r += 1
    return pivots


def _work_grid(m: ExactMatrix):
    grid = _rational_grid(m)
    if grid is not None:
        return grid, True
    return [list(r) for r in m.entries], False


def _back(x, desc, rational):
    return FieldElement.constant(x, desc) if rational else x


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    a, rational = _work_grid(m)
    pivots = _rref(a, m.cols)
    desc = m.descriptor
    return ExactMatrix([[_back(x, desc, rational) for x in r] for r in a],
                       m.rows, m.cols, desc), pivots


def kernel_basis(m: ExactMatrix) -> list[tuple]:
    """Basis of the null space, in reduced column-echelon form.

    The returned vectors, stacked as rows, form a reduced row echelon
    matrix; e.g. ker [3, -2] -> [(1, 3/2)].
    """
    desc = m.descriptor
    if m.cols == 0:
        return []
    a, rational = _work_grid(m)
    pivots = _rref(a, m.cols)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    zero_, one_ = (_ZERO, _ONE) if rational else (zero(desc), one(desc))
    raw = []
    for f in free:
        v = [zero_] * m.cols
        v[f] = one_
        for row, p in zip(a, pivots):
            if row[f]:
                v[p] = -row[f]
        raw.append(v)
    if not raw:
        return []
    _rref(raw, m.cols)
    return [tuple(_back(x, desc, rational) for x in v) for v in raw]


def image_basis(m: ExactMatrix) -> list[tuple]:
    """Basis of the column space, in reduced column-echelon form."""
    desc = m.descriptor
    if m.rows == 0 or m.cols == 0:
        return []
    t = m.T
    a, rational = _work_grid(t)
    pivots = _rref(a, t.cols)
    return [tuple(_back(x, desc, rational) for x in a[i]) for i in range(len(pivots))]


def solve(m: ExactMatrix, b) -> tuple:
    """The echelon particular solution of m x = b (free variables set to 0)."""
    b = tuple(b)
    if len(b) != m.rows:
        raise ShapeError(f"right-hand side of length {len(b)} for {m.shape} matrix")
    desc = m.descriptor
    for x in b:
        if isinstance(x, FieldElement):
            desc = desc.join(x.descriptor)
    aug = ExactMatrix([list(r) + [bi] for r, bi in zip(m.entries, b)], m.rows, m.cols + 1, desc)
    a, rational = _work_grid(aug)
    pivots = _rref(a, m.cols + 1)
    if m.cols in pivots:
        raise NoSolutionError("right-hand side is not in the image")
    zero_ = _ZERO if rational else zero(desc)
    x = [zero_] * m.cols
    for row, p in zip(a, pivots):
        x[p] = row[m.cols]
    return tuple(_back(v, desc, rational) for v in x)


def inverse(m: ExactMatrix) -> ExactMatrix:
    if m.rows != m.cols:
        raise ShapeError(f"inverse of non-square {m.shape} matrix")
    n = m.rows
    aug = hstack([m, ExactMatrix.identity(n, m.descriptor)], rows=n)
    a, rational = _work_grid(aug)
    pivots = _rref(a, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return ExactMatrix([[_back(x, m.descriptor, rational) for x in r[n:]] for r in a],
                       n, n, m.descriptor)


def evaluate_matrix(m: ExactMatrix, point) -> ExactMatrix:
    return ExactMatrix([[evaluate_at(x, point) for x in r] for r in m.entries], m.rows, m.cols)
