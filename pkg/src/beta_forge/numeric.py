"""Exact and certified arithmetic.

Rationals are ``gmpy2.mpq``.  Algebraic numbers live in a simple extension
Q(theta) given by a square-free integer polynomial and an interval isolating
one of its real roots; arithmetic reduces modulo the polynomial and signs are
decided by interval evaluation on a bisected isolating interval.  Certified
approximations are ``mpfr`` enclosures computed with directed rounding.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence, Union

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import (
    BetaNotGreaterThanOne,
    IncompatibleField,
    MultipleRoots,
    NoSignChange,
    SignUndetermined,
)

Rational = type(mpq())

DEFAULT_TOL = mpq(1, 10**10)
DEFAULT_PREC = 128
MAX_REFINEMENTS = 256
# Comparisons of certified scalars closer than this are reported undecided.
BOUNDARY_GUARD = mpq(1, 10**12)


def rational(x) -> mpq:
    """Coerce ints, strings ("3/7", "1.25"), Fractions and floats to mpq.

    Floats are converted by their exact binary value.
    """
    if isinstance(x, Rational):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return mpq(int(num), int(den))
        return mpq(s)
    if isinstance(x, float):
        return mpq(x)
    if isinstance(x, type(mpfr())):
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def floor_rational(x: mpq) -> int:
    return int(x.numerator // x.denominator)


def ceil_rational(x: mpq) -> int:
    return -int((-x.numerator) // x.denominator)


# ---------------------------------------------------------------------------
# Dense polynomials over Q: lists of mpq, ascending, no trailing zeros.

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qpoly(coeffs: Iterable) -> list:
    return _trim([mpq(c) for c in coeffs])


def _qadd(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _qsub(a: Sequence, b: Sequence) -> list:
    return _qadd(a, [-c for c in b])


def _qmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _qdivmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [mpq(0)] * max(len(a) - len(b) + 1, 0)
    lead_inv = 1 / mpq(b[-1])
    while len(rem) >= len(b):
        c = rem[-1] * lead_inv
        shift = len(rem) - len(b)
        quo[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] -= c * y
        rem.pop()
        _trim(rem)
    return _trim(quo), rem


def _qmonic(a: Sequence) -> list:
    inv = 1 / mpq(a[-1])
    return [c * inv for c in a]


def _qgcd(a: Sequence, b: Sequence) -> list:
    a, b = list(a), list(b)
    while b:
        a, b = b, _qdivmod(a, b)[1]
    return _qmonic(a) if a else []


def _qinverse_mod(a: Sequence, modulus: Sequence) -> list:
    """s with s*a = 1 mod modulus, or ZeroDivisionError if gcd is nontrivial."""
    r0, r1 = list(modulus), list(a)
    s0, s1 = [], [mpq(1)]
    while r1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qsub(s0, _qmul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is a zero divisor modulo the minimal polynomial")
    inv = 1 / r0[0]
    return [c * inv for c in s0]


def _qeval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _range_on(p: Sequence, lo: mpq, hi: mpq) -> tuple[mpq, mpq]:
    """Interval Horner enclosure of p over [lo, hi]."""
    if not p:
        return mpq(0), mpq(0)
    a = b = p[-1]
    for c in reversed(p[:-1]):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending degree."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        c = [int(v) for v in self.coefficients]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c) or (0,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return self.coefficients == (0,)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coefficients))[1:] or (0,))

    @cached_property
    def _q(self) -> list:
        return _qpoly(self.coefficients)

    def is_squarefree(self) -> bool:
        if self.degree < 1:
            return True
        return len(_qgcd(self._q, self.derivative()._q)) == 1

    @staticmethod
    def _chain(p: list) -> list[list]:
        chain = [p, _trim([i * c for i, c in enumerate(p)][1:])]
        while chain[-1]:
            r = _qdivmod(chain[-2], chain[-1])[1]
            if not r:
                break
            chain.append([-c for c in r])
        return [q for q in chain if q]

    @staticmethod
    def _variations(chain: list[list], x: mpq) -> int:
        signs = [s for s in (_sign(_qeval(q, x)) for q in chain) if s]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    def count_roots(self, lo, hi) -> int:
        """Number of distinct real roots in the open interval (lo, hi)."""
        lo, hi = rational(lo), rational(hi)
        if lo >= hi:
            return 0
        p = list(self._q)
        for e in (lo, hi):
            # divide out endpoint roots so Sturm counting applies
            while p and _qeval(p, e) == 0:
                p = _qdivmod(p, [-e, mpq(1)])[0]
        if len(p) <= 1:
            return 0
        chain = self._chain(p)
        return self._variations(chain, lo) - self._variations(chain, hi)

    def lipschitz_bound(self, lo, hi) -> mpq:
        """Bound on |p'| over [lo, hi]."""
        r = max(abs(rational(lo)), abs(rational(hi)))
        return sum((i * abs(c) * r ** (i - 1) for i, c in enumerate(self.coefficients) if i), mpq(0))

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0 and self.degree > 0:
                continue
            mag = abs(c)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            body = str(mag) if (mag != 1 or i == 0) else ""
            body = body + ("*" if body and mono else "") + mono
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


# ---------------------------------------------------------------------------

class NumberField:
    """Q(theta) where theta is the unique root of ``minpoly`` in (lo, hi)."""

    def __init__(self, minpoly: IntPolynomial, lo, hi):
        lo, hi = rational(lo), rational(hi)
        if not lo < hi:
            raise ValueError("isolating interval must satisfy lo < hi")
        if minpoly.degree < 1:
            raise ValueError("minimal polynomial must have positive degree")
        if not minpoly.is_squarefree():
            raise ValueError(f"{minpoly} is not square-free")
        n = minpoly.count_roots(lo, hi)
        if n == 0:
            raise NoSignChange(f"{minpoly} has no root in ({lo}, {hi})")
        if n > 1:
            raise MultipleRoots(f"{minpoly} has {n} roots in ({lo}, {hi})")
        self.minpoly = minpoly
        self.lo, self.hi = lo, hi
        self._monic = _qmonic(minpoly._q)
        self._lock = threading.Lock()
        self._brackets = [self._proper_bracket(minpoly, lo, hi)]

    @staticmethod
    def _proper_bracket(p: IntPolynomial, lo: mpq, hi: mpq) -> tuple[mpq, mpq]:
        # shrink until both endpoints are non-roots; then p changes sign
        while p(lo) == 0 or p(hi) == 0:
            mid = (lo + hi) / 2
            if p(mid) == 0:
                w = (hi - lo) / 4
                return mid - w, mid + w
            if p.count_roots(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return lo, hi

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def bracket(self, level: int) -> tuple[mpq, mpq]:
        """Isolating interval after ``level`` bisections."""
        br = self._brackets
        if level < len(br):
            return br[level]
        with self._lock:
            p = self.minpoly
            lo, hi = br[-1]
            s_lo = _sign(p(lo))
            while len(br) <= level:
                mid = (lo + hi) / 2
                s = _sign(p(mid))
                if s == 0:
                    w = (hi - lo) / 4
                    lo, hi = mid - w, mid + w
                    s_lo = _sign(p(lo))
                elif s == s_lo:
                    lo = mid
                else:
                    hi = mid
                br.append((lo, hi))
        return br[level]

    def compatible(self, other: "NumberField") -> bool:
        if other is self:
            return True
        if not isinstance(other, NumberField) or other.minpoly != self.minpoly:
            return False
        lo = max(self.bracket(0)[0], other.bracket(0)[0])
        hi = min(self.bracket(0)[1], other.bracket(0)[1])
        return lo < hi and self.minpoly.count_roots(lo, hi) == 1

    def element(self, coeffs: Iterable) -> "AlgebraicNumber":
        return AlgebraicNumber(self, _qpoly(coeffs))

    @cached_property
    def gen(self) -> "AlgebraicNumber":
        return self.element([0, 1])

    def __call__(self, value) -> "AlgebraicNumber":
        if isinstance(value, AlgebraicNumber):
            if not self.compatible(value.field):
                raise IncompatibleField("element belongs to a different field")
            return value if value.field is self else AlgebraicNumber(self, list(value.coeffs))
        return AlgebraicNumber(self, [rational(value)])

    def _reduce(self, p: list) -> list:
        if len(p) < len(self._monic):
            return p
        return _qdivmod(p, self._monic)[1]

    def __repr__(self) -> str:
        return f"NumberField({self.minpoly}, ({self.lo}, {self.hi}))"


def _coerce_pair(a: "AlgebraicNumber", b) -> "AlgebraicNumber":
    if isinstance(b, AlgebraicNumber):
        if b.field is not a.field and not a.field.compatible(b.field):
            raise IncompatibleField("operands belong to different fields")
        return b
    return AlgebraicNumber(a.field, [rational(b)])


class AlgebraicNumber:
    """Element of a NumberField, stored as a reduced polynomial in theta."""

    __slots__ = ("field", "coeffs", "_sgn", "__weakref__")

    def __init__(self, field: NumberField, coeffs: list):
        coeffs = field._reduce(_trim([mpq(c) for c in coeffs]))
        self.field = field
        self.coeffs: tuple[mpq, ...] = tuple(coeffs) or (mpq(0),)
        self._sgn = None

    # public accessors
    @property
    def minpoly(self) -> IntPolynomial:
        return self.field.minpoly

    @property
    def isolating_lo(self) -> mpq:
        return self.field.bracket(0)[0]

    @property
    def isolating_hi(self) -> mpq:
        return self.field.bracket(0)[1]

    def is_rational(self) -> bool:
        return len(self.coeffs) == 1

    def as_rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError("element is irrational (or not reduced to a constant)")
        return self.coeffs[0]

    # arithmetic
    def __add__(self, other):
        other = _coerce_pair(self, other)
        return AlgebraicNumber(self.field, _qadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = _coerce_pair(self, other)
        return AlgebraicNumber(self.field, _qsub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return _coerce_pair(self, other) - self

    def __mul__(self, other):
        if not isinstance(other, AlgebraicNumber):
            c = rational(other)
            return AlgebraicNumber(self.field, [x * c for x in self.coeffs])
        other = _coerce_pair(self, other)
        return AlgebraicNumber(self.field, _qmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_rational():
            if self.coeffs[0] == 0:
                raise ZeroDivisionError("division by zero in number field")
            return AlgebraicNumber(self.field, [1 / self.coeffs[0]])
        return AlgebraicNumber(self.field, _qinverse_mod(_trim(list(self.coeffs)), self.field._monic))

    def __truediv__(self, other):
        if not isinstance(other, AlgebraicNumber):
            c = rational(other)
            if c == 0:
                raise ZeroDivisionError("division by zero in number field")
            return AlgebraicNumber(self.field, [x / c for x in self.coeffs])
        return self * _coerce_pair(self, other).inverse()

    def __rtruediv__(self, other):
        return _coerce_pair(self, other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = AlgebraicNumber(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # ordering
    def sign(self) -> int:
        if self._sgn is None:
            self._sgn = self._compute_sign()
        return self._sgn

    def _compute_sign(self) -> int:
        c = self.coeffs
        if len(c) == 1:
            return _sign(c[0])
        p = list(c)
        for level in (48, 96, 160, MAX_REFINEMENTS):
            lo, hi = self.field.bracket(level)
            a, b = _range_on(p, lo, hi)
            if a > 0:
                return 1
            if b < 0:
                return -1
        # symbolic zero test for reducible minimal polynomials
        g = _qgcd(p, self.field.minpoly._q)
        if len(g) > 1:
            lo, hi = self.field.bracket(MAX_REFINEMENTS)
            gp = IntPolynomial(_integer_multiple(g))
            if gp(lo) == 0 or gp(hi) == 0 or gp.count_roots(lo, hi) > 0:
                return 0
        raise SignUndetermined("sign undetermined after maximal refinement")

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field is not self.field and not self.field.compatible(other.field):
                return False
            return self.coeffs == other.coeffs
        try:
            c = rational(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == (c,)

    def __hash__(self):
        if len(self.coeffs) == 1:
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.coeffs != (0,)

    def enclosure(self, level: int = 64) -> tuple[mpq, mpq]:
        """Rational bounds on the value, from the level-``level`` bracket."""
        if len(self.coeffs) == 1:
            return self.coeffs[0], self.coeffs[0]
        return _range_on(list(self.coeffs), *self.field.bracket(level))

    def floor(self) -> int:
        if len(self.coeffs) == 1:
            return floor_rational(self.coeffs[0])
        lo, hi = self.enclosure()
        f = floor_rational(lo)
        if floor_rational(hi) != f:
            while self < f:
                f -= 1
            while self >= f + 1:
                f += 1
        return f

    def ceil(self) -> int:
        return -(-self).floor()

    def __float__(self):
        lo, hi = self.enclosure()
        return float((lo + hi) / 2)

    def __repr__(self):
        if len(self.coeffs) == 1:
            return f"AlgebraicNumber({self.coeffs[0]})"
        return f"AlgebraicNumber({float(self):.12g}; {list(map(str, self.coeffs))} mod {self.field.minpoly})"


def _integer_multiple(p: Sequence[mpq]) -> list[int]:
    den = 1
    for c in p:
        den = math.lcm(den, int(c.denominator))
    return [int(c * den) for c in p]


def isolate_root(p: IntPolynomial, lo, hi, tol=DEFAULT_TOL) -> AlgebraicNumber:
    """Bisect (lo, hi) down to width <= tol around the unique root of p."""
    lo, hi, tol = rational(lo), rational(hi), rational(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    s_lo, s_hi = _sign(p(lo)), _sign(p(hi))
    if s_lo * s_hi >= 0:
        raise NoSignChange(f"{p} does not change sign on [{lo}, {hi}]")
    n = p.count_roots(lo, hi)
    if n != 1:
        raise MultipleRoots(f"{p} has {n} distinct roots in ({lo}, {hi})")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = _sign(p(mid))
        if s == 0:
            w = min(tol, hi - lo) / 4
            lo, hi = mid - w, mid + w
            break
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return NumberField(p, lo, hi).gen


def algebraic_compare(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """-1, 0 or 1.  Raises IncompatibleField for elements of different fields."""
    if not isinstance(a, AlgebraicNumber) or not isinstance(b, AlgebraicNumber):
        raise TypeError("algebraic_compare expects AlgebraicNumber operands")
    if a.field is not b.field and not a.field.compatible(b.field):
        raise IncompatibleField("operands belong to different fields")
    return (a - b).sign()


# ---------------------------------------------------------------------------
# Certified floating point.

_CTX_CACHE: dict[tuple[int, int], gmpy2.context] = {}


def _ctx(prec: int, mode) -> gmpy2.context:
    key = (prec, mode)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = _CTX_CACHE.setdefault(key, gmpy2.context(precision=prec, round=mode))
    return ctx


def down(prec: int) -> gmpy2.context:
    return _ctx(prec, gmpy2.RoundDown)


def up(prec: int) -> gmpy2.context:
    return _ctx(prec, gmpy2.RoundUp)


def to_mpfr(x, prec: int, rounding) -> mpfr:
    """Round an int / mpq / mpfr to ``prec`` bits in the given direction."""
    with _ctx(prec, rounding):
        return mpfr(x)


class Enclosure:
    """Closed interval [lo, hi] of mpfr endpoints with outward rounding."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: mpfr, hi: mpfr, prec: int = DEFAULT_PREC):
        if lo > hi:
            raise ValueError("empty enclosure")
        self.lo, self.hi, self.prec = lo, hi, prec

    @classmethod
    def of(cls, x, prec: int = DEFAULT_PREC) -> "Enclosure":
        if isinstance(x, Enclosure):
            return x
        if isinstance(x, CertifiedValue):
            return x.enclosure(prec)
        if isinstance(x, AlgebraicNumber):
            lo, hi = x.enclosure(max(64, prec))
            return cls(to_mpfr(lo, prec, gmpy2.RoundDown), to_mpfr(hi, prec, gmpy2.RoundUp), prec)
        q = rational(x) if not isinstance(x, (int, type(mpfr()))) else x
        return cls(to_mpfr(q, prec, gmpy2.RoundDown), to_mpfr(q, prec, gmpy2.RoundUp), prec)

    def _other(self, other) -> "Enclosure":
        return other if isinstance(other, Enclosure) else Enclosure.of(other, self.prec)

    def __add__(self, other):
        o = self._other(other)
        p = max(self.prec, o.prec)
        return Enclosure(down(p).add(self.lo, o.lo), up(p).add(self.hi, o.hi), p)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo, self.prec)

    def __sub__(self, other):
        o = self._other(other)
        p = max(self.prec, o.prec)
        return Enclosure(down(p).sub(self.lo, o.hi), up(p).sub(self.hi, o.lo), p)

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        p = max(self.prec, o.prec)
        d, u = down(p), up(p)
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        return Enclosure(min(d.mul(a, b) for a, b in pairs), max(u.mul(a, b) for a, b in pairs), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("enclosure of divisor contains zero")
        p = max(self.prec, o.prec)
        d, u = down(p), up(p)
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        return Enclosure(min(d.div(a, b) for a, b in pairs), max(u.div(a, b) for a, b in pairs), p)

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = Enclosure.of(1, self.prec)
        for _ in range(e):
            result = result * self
        return result

    @property
    def width(self) -> mpfr:
        return up(self.prec).sub(self.hi, self.lo)

    def mid(self) -> mpfr:
        with _ctx(self.prec + 2, gmpy2.RoundToNearest):
            return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        o = self._other(x)
        return self.lo <= o.lo and o.hi <= self.hi

    def compare(self, other, guard=BOUNDARY_GUARD):
        """-1 / 1 when separated by more than ``guard``, else None."""
        o = self._other(other)
        g = to_mpfr(guard, self.prec, gmpy2.RoundUp) if guard else 0
        if up(self.prec).add(self.hi, g) < o.lo:
            return -1
        if down(self.prec).sub(self.lo, g) > o.hi:
            return 1
        return None

    def __float__(self):
        return float(self.mid())

    def __repr__(self):
        return f"Enclosure([{self.lo}, {self.hi}])"


@dataclass(frozen=True)
class CertifiedValue:
    """``value`` +- ``error_bound`` contains the true value.

    ``refine`` (optional) recomputes the same quantity to a tighter tolerance.
    """

    value: mpfr
    error_bound: mpfr
    refine: Callable[[mpq], "CertifiedValue"] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.error_bound < 0:
            raise ValueError("error_bound must be nonnegative")

    @property
    def prec(self) -> int:
        return max(self.value.precision, DEFAULT_PREC)

    def lower(self) -> mpfr:
        return down(self.prec).sub(self.value, self.error_bound)

    def upper(self) -> mpfr:
        return up(self.prec).add(self.value, self.error_bound)

    def enclosure(self, prec: int | None = None) -> Enclosure:
        p = max(prec or 0, self.prec)
        return Enclosure(self.lower(), self.upper(), p)

    @classmethod
    def from_bounds(cls, lo, hi, prec: int = DEFAULT_PREC, refine=None) -> "CertifiedValue":
        lo = to_mpfr(lo, prec, gmpy2.RoundDown)
        hi = to_mpfr(hi, prec, gmpy2.RoundUp)
        if lo > hi:
            raise ValueError("lo > hi")
        with _ctx(prec + 2, gmpy2.RoundToNearest):
            value = lo + (hi - lo) / 2
        err = max(up(prec).sub(hi, value), up(prec).sub(value, lo))
        return cls(value, err, refine)

    @classmethod
    def exact(cls, x, prec: int = DEFAULT_PREC) -> "CertifiedValue":
        e = Enclosure.of(x, prec)
        return cls.from_bounds(e.lo, e.hi, prec)

    def contains(self, x) -> bool:
        e = Enclosure.of(x, self.prec)
        return self.lower() <= e.lo and e.hi <= self.upper()

    def __float__(self):
        return float(self.value)


Scalar = Union[mpq, AlgebraicNumber, Enclosure]


def is_exact(x) -> bool:
    return isinstance(x, (int, Rational, AlgebraicNumber))


def eval_tail_bounded_series(digits, beta: CertifiedValue, n_terms: int,
                             alphabet_max: int | None = None, prec: int | None = None) -> CertifiedValue:
    """Certified sum_{i=1}^{n} d_i beta^-i plus the tail bound m beta^-n/(beta-1).

    ``digits`` is a DigitSequence (anything with ``prefix`` and
    ``alphabet_max``) or a plain sequence of ints, in which case the tail
    bound uses ``alphabet_max`` (default: the largest digit seen).
    """
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    if not isinstance(beta, CertifiedValue):
        beta = CertifiedValue.exact(beta)
    if hasattr(digits, "prefix"):
        ds = list(digits.prefix(n_terms))
        m = digits.alphabet_max if alphabet_max is None else alphabet_max
    else:
        ds = list(digits[:n_terms])
        m = alphabet_max if alphabet_max is not None else max(ds, default=0)
    if len(ds) < n_terms:
        ds += [0] * (n_terms - len(ds))
    if prec is None:
        err = beta.error_bound
        bits = int(-gmpy2.log2(err)) if err > 0 else 0
        prec = max(DEFAULT_PREC, bits + 64, n_terms.bit_length() + 64)
    b_lo, b_hi = beta.lower(), beta.upper()
    if b_lo <= 1:
        raise BetaNotGreaterThanOne(f"certified lower edge of beta is {b_lo}")
    d, u = down(prec), up(prec)
    # the sum is decreasing in beta and each Horner step is monotone in its input
    s_lo = mpfr(0)
    s_hi = mpfr(0)
    for digit in reversed(ds):
        s_lo = d.div(d.add(s_lo, digit), b_hi)
        s_hi = u.div(u.add(s_hi, digit), b_lo)
    power = d.pow(b_lo, n_terms)
    tail = u.div(m, d.mul(power, d.sub(b_lo, 1))) if m else mpfr(0)
    return CertifiedValue.from_bounds(s_lo, u.add(s_hi, tail), prec)


def compare(a, b, guard=BOUNDARY_GUARD):
    """Three-way comparison of scalars.

    Exact operands (ints, rationals, algebraic numbers) give -1, 0 or 1.  If
    either operand is certified the result is -1 or 1 only when the
    enclosures are separated by more than ``guard``; otherwise None.
    """
    if isinstance(a, (Enclosure, CertifiedValue)) or isinstance(b, (Enclosure, CertifiedValue)):
        prec = max(getattr(a, "prec", DEFAULT_PREC), getattr(b, "prec", DEFAULT_PREC))
        return Enclosure.of(a, prec).compare(b, guard)
    if (isinstance(a, AlgebraicNumber) and isinstance(b, AlgebraicNumber)
            and a.field is not b.field and not a.field.compatible(b.field)):
        return _cross_field_compare(a, b)
    d = a - b
    return d.sign() if isinstance(d, AlgebraicNumber) else _sign(d)


def _cross_field_compare(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    # no common field: separate the rational enclosures; equality is not decidable here
    for level in (48, 96, 160, MAX_REFINEMENTS):
        a_lo, a_hi = a.enclosure(level)
        b_lo, b_hi = b.enclosure(level)
        if a_hi < b_lo:
            return -1
        if b_hi < a_lo:
            return 1
    raise SignUndetermined("numbers from different fields could not be separated")


def floor_scalar(x, guard=BOUNDARY_GUARD):
    """Exact floor; for enclosures None when within ``guard`` of an integer."""
    if isinstance(x, int):
        return x
    if isinstance(x, Rational):
        return floor_rational(x)
    if isinstance(x, AlgebraicNumber):
        return x.floor()
    if isinstance(x, CertifiedValue):
        x = x.enclosure()
    f = int(gmpy2.floor(x.lo))
    g = to_mpfr(guard, x.prec, gmpy2.RoundUp)
    if down(x.prec).sub(x.lo, g) >= f and up(x.prec).add(x.hi, g) < f + 1:
        return f
    return None


def ceil_scalar(x, guard=BOUNDARY_GUARD):
    f = floor_scalar(-x if not isinstance(x, CertifiedValue) else -x.enclosure(), guard)
    return None if f is None else -f
