"""Maps T_i(x) = beta*x - i and the interval geometry they induce on I = [0, m/(beta-1)].

Scalars are exact (mpq or AlgebraicNumber) when beta is exact, and
``Enclosure`` objects when beta is a CertifiedValue.  Every predicate goes
through ``numeric.compare`` so certified comparisons near a boundary come
back as undecided instead of guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .errors import BetaOutOfRange, DigitOutOfRange
from .numeric import (
    AlgebraicNumber,
    CertifiedValue,
    Enclosure,
    IntPolynomial,
    NumberField,
    Rational,
    ceil_scalar,
    compare,
    floor_scalar,
    rational,
)


@dataclass(frozen=True)
class ExpansionParams:
    """Alphabet {0..m} and base beta in (1, m+1]."""

    m: int
    beta: object

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise BetaOutOfRange(f"m must be a positive integer, got {self.m!r}")
        beta = self.beta
        if isinstance(beta, AlgebraicNumber) and beta.is_rational():
            beta = beta.as_rational()
        elif not isinstance(beta, (AlgebraicNumber, CertifiedValue)):
            beta = rational(beta)
        object.__setattr__(self, "beta", beta)
        lo_ok = compare(beta, 1, guard=0)
        hi_ok = compare(beta, self.m + 1, guard=0)
        if lo_ok is None or hi_ok is None:
            raise BetaOutOfRange(f"cannot certify 1 < beta <= {self.m + 1} for beta = {float(beta):.12g}")
        if lo_ok <= 0 or hi_ok > 0:
            raise BetaOutOfRange(f"beta = {float(beta):.12g} not in (1, {self.m + 1}]")

    @property
    def k(self) -> int:
        return self.m // 2

    @property
    def exact(self) -> bool:
        return not isinstance(self.beta, CertifiedValue)

    @cached_property
    def b(self):
        """beta as an arithmetic scalar (an Enclosure in certified mode)."""
        return self.beta.enclosure() if isinstance(self.beta, CertifiedValue) else self.beta

    @property
    def field(self) -> Optional[NumberField]:
        return self.beta.field if isinstance(self.beta, AlgebraicNumber) else None

    @cached_property
    def right_end(self):
        """m/(beta-1), the right endpoint of I."""
        return self.m / (self.b - 1)

    def point(self, x):
        """Coerce x into the scalar type used for this beta."""
        if not self.exact:
            return Enclosure.of(x, self.b.prec)
        if isinstance(x, AlgebraicNumber):
            if self.field is None:
                if x.is_rational():
                    return x.as_rational()
                raise TypeError("algebraic point with rational beta")
            return self.field(x)
        if isinstance(x, (Enclosure, CertifiedValue)):
            raise TypeError("certified point with exact beta")
        q = rational(x)
        return self.field(q) if self.field is not None else q

    def __str__(self) -> str:
        return f"m={self.m}, beta={float(self.beta):.10g}"


class _Empty:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def contains(self, x) -> bool:
        return False

    def __repr__(self) -> str:
        return "EMPTY"


EMPTY = _Empty()


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        if compare(self.lo, self.hi, guard=0) == 1:
            raise ValueError("Interval requires lo <= hi; use EMPTY")

    def contains(self, x) -> Optional[bool]:
        """True / False, or None when undecided in certified mode."""
        a = compare(x, self.lo)
        b = compare(x, self.hi)
        if a is None or b is None:
            return None
        left = a > 0 or (a == 0 and self.lo_closed)
        right = b < 0 or (b == 0 and self.hi_closed)
        return left and right

    def is_point(self) -> bool:
        return compare(self.lo, self.hi, guard=0) == 0

    def as_floats(self) -> tuple[float, float]:
        return float(self.lo), float(self.hi)


def apply_map(params: ExpansionParams, i: int, x):
    if not isinstance(i, int) or not 0 <= i <= params.m:
        raise DigitOutOfRange(f"digit {i!r} not in 0..{params.m}")
    return params.b * x - i


def choice_upper(params: ExpansionParams, i: int):
    """((i-1)beta + m - (i-1)) / (beta(beta-1)): right end of the i-th choice interval."""
    b = params.b
    return ((i - 1) * b + params.m - (i - 1)) / (b * (b - 1))


def digit_upper(params: ExpansionParams, i: int):
    b = params.b
    return (i * b + params.m - i) / (b * (b - 1))


def switch_right(params: ExpansionParams):
    return choice_upper(params, params.m)


@dataclass(frozen=True)
class IntervalCatalog:
    params: ExpansionParams
    digit: tuple
    choice: dict
    switch_region: Interval
    fixed_digit: dict

    @property
    def I(self) -> Interval:
        return Interval(0 * self.params.b, self.params.right_end)


def _interior_fixed(params: ExpansionParams) -> Optional[bool]:
    """Whether beta >= (m+2)/2, i.e. interior fixed-digit intervals exist."""
    c = compare(params.b, rational(params.m + 2) / 2, guard=0)
    return None if c is None else c >= 0


def build_catalog(params: ExpansionParams) -> IntervalCatalog:
    m, b = params.m, params.b
    zero = 0 * b
    digit = tuple(Interval(i / b + zero, digit_upper(params, i)) for i in range(m + 1))
    choice = {i: Interval(i / b + zero, choice_upper(params, i)) for i in range(1, m + 1)}
    switch = Interval(1 / b + zero, switch_right(params))
    fixed = {0: Interval(zero, 1 / b + zero), m: Interval(switch_right(params), params.right_end)}
    interior = _interior_fixed(params)
    if interior is None:
        raise BetaOutOfRange("cannot certify whether beta >= (m+2)/2")
    if interior:
        for i in range(1, m):
            fixed[i] = Interval(choice_upper(params, i), (i + 1) / b + zero)
    return IntervalCatalog(params, digit, choice, switch, dict(sorted(fixed.items())))


@dataclass(frozen=True)
class Location:
    choice: tuple = ()
    fixed: tuple = ()
    outside: bool = False
    undetermined: bool = False

    @property
    def kind(self) -> str:
        if self.undetermined:
            return "undetermined"
        if self.outside:
            return "outside_I"
        return "in_choice" if self.choice else "in_fixed_digit"

    def __str__(self) -> str:
        if self.undetermined or self.outside:
            return self.kind
        parts = [f"in_choice({i})" for i in self.choice] + [f"in_fixed_digit({i})" for i in self.fixed]
        return ", ".join(parts)


def locate(catalog: IntervalCatalog, x) -> Location:
    inside = catalog.I.contains(x)
    if inside is None:
        return Location(undetermined=True)
    if not inside:
        return Location(outside=True)
    flags = {i: iv.contains(x) for i, iv in catalog.choice.items()}
    fixed = {i: iv.contains(x) for i, iv in catalog.fixed_digit.items()}
    if None in flags.values() or None in fixed.values():
        return Location(undetermined=True)
    return Location(choice=tuple(i for i, f in flags.items() if f), fixed=tuple(i for i, f in fixed.items() if f))


def available_digits(params: ExpansionParams, y) -> Optional[range]:
    """Digits i with T_i(y) in I, or None when a certified decision is impossible.

    These are the integers in [beta*y - m/(beta-1), beta*y] clipped to 0..m.
    """
    by = params.b * y
    hi = floor_scalar(by)
    lo = ceil_scalar(by - params.right_end)
    if hi is None or lo is None:
        return None
    return range(max(0, lo), min(params.m, hi) + 1)


def center_point(params: ExpansionParams):
    """k/(beta-1), the fixed point of T_k."""
    return params.k / (params.b - 1)


def cycle_points(params: ExpansionParams) -> tuple:
    """The 2-cycle (k*beta+k+1)/(beta^2-1) <-> ((k+1)*beta+k)/(beta^2-1) of T_k, T_{k+1}."""
    b, k = params.b, params.k
    d = b * b - 1
    return (k * b + k + 1) / d, ((k + 1) * b + k) / d


def distinguished_points(params: ExpansionParams) -> tuple:
    return (center_point(params),) if params.m % 2 == 0 else cycle_points(params)


def switch_lemma_bound(m: int) -> AlgebraicNumber:
    """(m + sqrt(m^2+4))/2, the positive root of x^2 - m x - 1."""
    return NumberField(IntPolynomial((-1, -m, 1)), m, m + 1).gen
