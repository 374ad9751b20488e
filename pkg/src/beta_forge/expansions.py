"""Digit sequences: branching enumeration, greedy-type algorithms,
lexicographic admissibility and uniqueness certificates."""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    BetaBelowThreshold,
    FrontierTooLarge,
    HorizonTooShort,
    InexactPoint,
    PointOutsideI,
)
from .geometry import (
    ExpansionParams,
    available_digits,
    build_catalog,
    distinguished_points,
    locate,
)
from .numeric import CertifiedValue, Enclosure, Rational, ceil_scalar, compare
from .words import DigitSequence, compare_periodic, compare_prefix

DEFAULT_MAX_STEPS = 4096
DEFAULT_N_CHECK = 256


def _require_in_I(params: ExpansionParams, x):
    y = params.point(x)
    if compare(y, 0, guard=0) == -1 or compare(y, params.right_end, guard=0) == 1:
        raise PointOutsideI(f"x = {float(y):.12g} outside [0, {float(params.right_end):.12g}]")
    return y


def _digits_or_raise(params: ExpansionParams, y) -> range:
    r = available_digits(params, y)
    if r is None:
        raise InexactPoint(f"orbit point {float(y):.12g} too close to a digit-interval boundary")
    return r


@dataclass(frozen=True)
class TreeNode:
    parent: int
    digit: Optional[int]
    point: object


@dataclass
class BranchTree:
    params: ExpansionParams
    root_point: object
    levels: list

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def leaf_count(self) -> int:
        return len(self.levels[-1])

    def prefix(self, level: int, index: int) -> tuple:
        digits = []
        while level > 0:
            node = self.levels[level][index]
            digits.append(node.digit)
            index = node.parent
            level -= 1
        return tuple(reversed(digits))

    def prefixes(self, level: Optional[int] = None) -> list[tuple]:
        level = self.depth if level is None else level
        return [self.prefix(level, i) for i in range(len(self.levels[level]))]


def expand_tree(params: ExpansionParams, x, n: int) -> BranchTree:
    """Every length-n digit prefix of x, with the orbit point at each node."""
    if n < 0:
        raise ValueError("depth must be nonnegative")
    y0 = _require_in_I(params, x)
    levels = [[TreeNode(-1, None, y0)]]
    b = params.b
    for _ in range(n):
        nxt = []
        for idx, node in enumerate(levels[-1]):
            by = b * node.point
            for i in _digits_or_raise(params, node.point):
                nxt.append(TreeNode(idx, i, by - i))
        levels.append(nxt)
    return BranchTree(params, y0, levels)


@dataclass(frozen=True)
class PrefixCount:
    counts: tuple
    growth: tuple

    @property
    def count(self) -> int:
        return self.counts[-1]


def _growth(counts, m: int) -> tuple:
    return tuple(math.log(c, m + 1) / j for j, c in enumerate(counts) if j > 0)


def count_prefixes(params: ExpansionParams, x, n: int, max_frontier: Optional[int] = None) -> PrefixCount:
    """Number of length-j prefixes for j = 0..n without building the tree.

    Equal orbit points are merged and carry a multiplicity.
    """
    if n < 0:
        raise ValueError("depth must be nonnegative")
    y0 = _require_in_I(params, x)
    b = params.b
    counts = [1]
    if not params.exact:
        # enclosures are not hashable; no merging
        frontier = [(y0, 1)]
        for _ in range(n):
            nxt = []
            for y, mult in frontier:
                by = b * y
                nxt.extend((by - i, mult) for i in _digits_or_raise(params, y))
            frontier = nxt
            counts.append(sum(mu for _, mu in frontier))
            if max_frontier is not None and len(frontier) > max_frontier:
                raise FrontierTooLarge(f"frontier exceeded {max_frontier} points", counts)
        return PrefixCount(tuple(counts), _growth(counts, params.m))
    if isinstance(b, Rational) and isinstance(y0, Rational):
        _count_rational(params, y0, n, max_frontier, counts)
        return PrefixCount(tuple(counts), _growth(counts, params.m))
    frontier = {y0: 1}
    for _ in range(n):
        nxt: dict = {}
        for y, mult in frontier.items():
            by = b * y
            for i in _digits_or_raise(params, y):
                z = by - i
                nxt[z] = nxt.get(z, 0) + mult
        frontier = nxt
        counts.append(sum(frontier.values()))
        if max_frontier is not None and len(frontier) > max_frontier:
            raise FrontierTooLarge(f"frontier exceeded {max_frontier} points", counts)
    return PrefixCount(tuple(counts), _growth(counts, params.m))


def _count_rational(params: ExpansionParams, y0, n: int, max_frontier: Optional[int], counts: list) -> None:
    """Same recursion with beta = p/q: points kept as integer numerators over q^j * den(x)."""
    p, q, m = int(params.b.numerator), int(params.b.denominator), params.m
    den = int(y0.denominator)
    frontier = {int(y0.numerator): 1}
    for _ in range(n):
        den_next = den * q
        # digits i with T_i(y) in I: i in [A/D - m q/(p-q), A/D] where A = p*Y, D = den_next
        scale = (p - q) * den_next
        shift = m * q * den_next
        nxt: dict = {}
        for y, mult in frontier.items():
            a = p * y
            hi = min(m, a // den_next)
            lo = max(0, -((shift - a * (p - q)) // scale))
            for i in range(lo, hi + 1):
                z = a - i * den_next
                nxt[z] = nxt.get(z, 0) + mult
        frontier, den = nxt, den_next
        counts.append(sum(frontier.values()))
        if max_frontier is not None and len(frontier) > max_frontier:
            raise FrontierTooLarge(f"frontier exceeded {max_frontier} points", counts)


def greedy_expansion(params: ExpansionParams, x, n: int) -> DigitSequence:
    """Largest admissible digit at every step."""
    y = _require_in_I(params, x)
    digits = []
    for _ in range(n):
        d = _digits_or_raise(params, y)[-1]
        digits.append(d)
        y = params.b * y - d
    return DigitSequence.finite(digits, params.m)


def lazy_expansion(params: ExpansionParams, x, n: int) -> DigitSequence:
    """Smallest admissible digit at every step."""
    y = _require_in_I(params, x)
    digits = []
    for _ in range(n):
        d = _digits_or_raise(params, y)[0]
        digits.append(d)
        y = params.b * y - d
    return DigitSequence.finite(digits, params.m)


# ---------------------------------------------------------------------------
# quasi-greedy expansion of 1

def _quasi_greedy_exact(params: ExpansionParams, n: int) -> tuple[list, Optional[int]]:
    """Digits and, if the remainder orbit closes, the index where the period starts."""
    b, m = params.b, params.m
    r = params.point(1)
    seen = {r: 0}
    digits = []
    for step in range(n):
        y = b * r
        d = min(m, ceil_scalar(y, 0) - 1)
        r = y - d
        digits.append(int(d))
        if r in seen:
            return digits, seen[r]
        seen[r] = step + 1
    return digits, None


def _quasi_greedy_certified(params: ExpansionParams, n: int) -> list:
    beta = params.beta
    while True:
        digits = certified_quasi_greedy_prefix(beta, params.m, n)
        if len(digits) == n:
            return digits
        if beta.refine is None:
            raise InexactPoint("quasi-greedy digit undecidable at the given precision of beta")
        beta = beta.refine(beta.error_bound / 2**64)


def certified_quasi_greedy_prefix(beta: CertifiedValue, m: int, n: int) -> list:
    """The longest prefix (up to n) whose digits are decided by beta's enclosure alone."""
    prec = max(beta.prec, 64 + 4 * n)
    enc = beta.enclosure(prec)
    inv = 1 / enc
    power = Enclosure.of(1, prec)
    total = Enclosure.of(0, prec)
    digits = []
    for _ in range(n):
        power = power * inv
        for d in range(m, -1, -1):
            c = (total + power * d).compare(1, guard=0) if d else -1
            if c == -1:
                break
            if c is None:
                return digits
        digits.append(d)
        total = total + power * d
    return digits


def quasi_greedy_one(params: ExpansionParams, n: int) -> DigitSequence:
    """First n digits of the quasi-greedy expansion of 1.

    Exact beta gives exact digits.  A certified beta is refined through its
    ``refine`` callback whenever a digit is undecided.
    """
    if params.exact:
        digits, start = _quasi_greedy_exact(params, n)
        if start is not None:
            word = DigitSequence.periodic(digits[start:], params.m, digits[:start])
            return DigitSequence.finite(word.prefix(n), params.m)
        return DigitSequence.finite(digits, params.m)
    return DigitSequence.finite(_quasi_greedy_certified(params, n), params.m)


def quasi_greedy_periodic(params: ExpansionParams, max_steps: int = DEFAULT_MAX_STEPS) -> Optional[DigitSequence]:
    """The quasi-greedy expansion as an infinite word if its remainders cycle exactly."""
    if not params.exact:
        return None
    digits, start = _quasi_greedy_exact(params, max_steps)
    if start is None:
        return None
    return DigitSequence.periodic(digits[start:], params.m, digits[:start]).canonical()


@lru_cache(maxsize=256)
def _admissibility_bound(params: ExpansionParams, n_check: int):
    d = quasi_greedy_periodic(params, max_steps=max(n_check, 64))
    if d is not None:
        return d, None
    return None, quasi_greedy_one(params, n_check).prefix(n_check)


def is_admissible(params: ExpansionParams, word: DigitSequence, n_check: int = DEFAULT_N_CHECK) -> bool:
    """Every shift strictly below the quasi-greedy expansion d of 1 and strictly above m - d."""
    if word.is_finite:
        raise ValueError("admissibility is defined for infinite words")
    if any(dig > params.m for dig in word.preperiod + word.period):
        return False
    shifts = DigitSequence(word.preperiod, word.period, params.m).distinct_shifts()
    d, dp = _admissibility_bound(params, n_check)
    if d is not None:
        dbar = d.reflect()
        return all(compare_periodic(s, d) < 0 and compare_periodic(s, dbar) > 0 for s in shifts)
    dbar = tuple(params.m - v for v in dp)
    for s in shifts:
        sp = s.prefix(n_check)
        upper, lower = compare_prefix(sp, dp), compare_prefix(sp, dbar)
        if upper is None or lower is None:
            raise HorizonTooShort(f"shift {s} ties with the quasi-greedy bound over {n_check} digits")
        if upper > 0 or lower < 0:
            return False
    return True


# ---------------------------------------------------------------------------
# uniqueness

@dataclass(frozen=True)
class BranchWitness:
    step: int
    point: object
    digits: tuple
    prefix: tuple


@dataclass(frozen=True)
class OrbitWitness:
    orbit: tuple
    digits: tuple
    cycle_start: int
    locations: tuple

    @property
    def cycle_length(self) -> int:
        return len(self.orbit) - self.cycle_start

    def word(self, m: int) -> DigitSequence:
        return DigitSequence.periodic(self.digits[self.cycle_start:], m, self.digits[: self.cycle_start])


@dataclass(frozen=True)
class UniquenessCertificate:
    point: object
    verdict: str
    witness: object = None
    reason: Optional[str] = None
    steps: int = 0

    @property
    def is_unique(self) -> bool:
        return self.verdict == "unique"


def uniqueness_certificate(params: ExpansionParams, x, max_steps: int = DEFAULT_MAX_STEPS) -> UniquenessCertificate:
    """Follow the orbit of x while it has a single admissible digit.

    An exact revisit proves uniqueness; a point with two digits disproves it.
    Certified (float) inputs never produce ``unique``.
    """
    y = _require_in_I(params, x)
    x0 = y
    orbit, digits = [y], []
    seen = {y: 0} if params.exact else None
    b = params.b
    for t in range(max_steps):
        r = available_digits(params, y)
        if r is None:
            return UniquenessCertificate(x0, "undecided", None, "boundary", t)
        if len(r) >= 2:
            return UniquenessCertificate(x0, "not_unique", BranchWitness(t, y, tuple(r), tuple(digits)), None, t)
        d = r[0]
        digits.append(d)
        y = b * y - d
        if seen is not None:
            if y in seen:
                catalog = build_catalog(params)
                locs = tuple(str(locate(catalog, p)) for p in orbit)
                w = OrbitWitness(tuple(orbit), tuple(digits), seen[y], locs)
                return UniquenessCertificate(x0, "unique", w, None, t + 1)
            seen[y] = t + 1
        orbit.append(y)
    return UniquenessCertificate(x0, "undecided", None, "horizon", max_steps)


def uniqueness_preimage_family(params: ExpansionParams, depth: int) -> list:
    """x0 / beta^j for j = 1..depth (just x0 when depth = 0), all certified unique.

    x0 is k/(beta-1) for even m and (k beta + k + 1)/(beta^2 - 1) for odd m.
    """
    from .constants import golden_ratio

    c = compare(params.b, golden_ratio(params.m), guard=0)
    if c is None or c <= 0:
        raise BetaBelowThreshold("uniqueness family needs beta > G(m)")
    x0 = distinguished_points(params)[0]
    points = [x0] if depth == 0 else [x0 / params.b**j for j in range(1, depth + 1)]
    for p in points:
        cert = uniqueness_certificate(params, p)
        if not cert.is_unique:
            raise RuntimeError(f"preimage {float(p):.12g} failed its certificate: {cert.verdict}")
    return points
