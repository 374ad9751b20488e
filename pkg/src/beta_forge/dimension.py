"""Certified lower bounds for the Hausdorff dimension of the set of expansions.

An interval J = [L, R] containing the switch region is built from the
epsilon schedule, then covered by pieces each carrying two distinct digit
words of a common length n whose exact affine images stay in I at every
step and land inside J.  That gives dim >= log_{m+1} 2 / n.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, replace
from typing import Optional

from .errors import (
    BetaNotExact,
    CertificationFailure,
    DegenerateInterval,
    JxNotFound,
    NotBelowGoldenRatio,
    PointOutsideI,
)
from .expansions import _digits_or_raise
from .geometry import ExpansionParams, Interval, apply_map, choice_upper, switch_right
from .numeric import ceil_scalar, compare, floor_scalar

MAX_WORD_LENGTH = 32
NODE_BUDGET = 4000
MIN_PIECE_FRACTION = 2**-30
FRONTIER_LIMIT = 20_000


@dataclass(frozen=True)
class DoublingInterval:
    L: object
    R: object
    epsilons: dict
    eps_star: dict
    parity_case: str
    n_beta: Optional[int] = None

    @property
    def interval(self) -> Interval:
        return Interval(self.L, self.R)

    def contains(self, y) -> bool:
        return self.L <= y <= self.R


def _check_below_golden(params: ExpansionParams) -> None:
    from .constants import golden_ratio

    if not params.exact:
        raise BetaNotExact("the doubling construction needs an exactly represented beta")
    if compare(params.b, golden_ratio(params.m)) >= 0:
        raise NotBelowGoldenRatio(f"beta = {float(params.b):.8g} is not below G({params.m})")


def parity_case(params: ExpansionParams) -> str:
    m, k, b = params.m, params.k, params.b
    if m % 2 == 0 or m == 1:
        return "even"
    return "odd_high" if 2 * b >= 2 * k + 3 else "odd_low"


def epsilon_schedule(params: ExpansionParams, case: Optional[str] = None) -> tuple[dict, dict]:
    """(epsilons, eps_star): epsilons[0] is the switch trim, epsilons[i] for i = 1..m-1."""
    _check_below_golden(params)
    case = case or parity_case(params)
    m, k, b = params.m, params.k, params.b
    one = params.point(1)
    eps: dict = {}
    for i in range(1, m):
        c = choice_upper(params, i)
        if case == "odd_high":
            fixed = i * one / (b - 1)
            eps[i] = (c - fixed) / 2 if i <= k else (fixed - (i + 1) / b) / 2
        else:
            eps[i] = (c - (i + 1) / b) / 2
        if eps[i] <= 0:
            raise DegenerateInterval(f"epsilon_{i} = {float(eps[i]):.3g} is not positive")
    s_r = switch_right(params)
    eps0 = min((s_r - 1) / (b + 1), 1 - one / b, one / b) / 2
    if eps0 <= 0:
        raise DegenerateInterval("switch trim epsilon_0 is not positive")
    eps[0] = eps0
    star: dict = {}
    if case == "odd_high":
        low = ((k + 2) / b + eps[k + 1] - 1) / b / 2
        high = ((m + 1 - b) / (b - 1) - choice_upper(params, k) + eps[k]) / b / 2
        for i in range(1, k):
            star[i] = low
        for i in range(k + 2, m):
            star[i] = high
        for i, v in star.items():
            if v <= 0:
                raise DegenerateInterval(f"epsilon*_{i} is not positive")
    return eps, star


def _endpoints(params: ExpansionParams, eps: dict, star: dict, case: str):
    m, k, b = params.m, params.k, params.b
    T = lambda i, x: apply_map(params, i, x)
    s_r = switch_right(params)
    e0 = eps[0]
    lows = [T(1, 1 / b + e0)]
    highs = [T(m - 1, s_r - e0)]
    if case == "odd_high":
        lows.append(T(k + 1, (k * b + k + 1) / (b * b - 1)))
        highs.append(T(k, ((k + 1) * b + k) / (b * b - 1)))
        lows += [T(i, i / b + star[i - 1]) for i in range(2, k + 1)]
        lows += [T(i, i / b + eps[i - 1]) for i in range(k + 2, m + 1)]
        highs += [T(i - 1, choice_upper(params, i) - eps[i]) for i in range(1, k + 1)]
        highs += [T(i - 1, choice_upper(params, i) - star[i]) for i in range(k + 2, m)]
    else:
        lows += [T(i + 1, (i + 1) / b + eps[i]) for i in range(1, m)]
        highs += [T(i - 1, (i + 1) / b + eps[i]) for i in range(1, m)]
    return min(lows), max(highs)


def build_doubling_interval(params: ExpansionParams, case: Optional[str] = None) -> DoublingInterval:
    """The interval [L, R], with epsilon_0 halved until it contains the switch region."""
    case = case or parity_case(params)
    eps, star = epsilon_schedule(params, case)
    b = params.b
    s_l, s_r = 1 / b, switch_right(params)
    for _ in range(64):
        L, R = _endpoints(params, eps, star, case)
        if L <= s_l and R >= s_r:
            break
        eps[0] = eps[0] / 2
    else:
        raise DegenerateInterval("could not make the doubling interval contain the switch region")
    if not (0 < L < R < params.right_end):
        raise DegenerateInterval(f"[{float(L):.6g}, {float(R):.6g}] is not interior to I")
    return DoublingInterval(L, R, eps, star, case)


def _seed_points(params: ExpansionParams, di: DoublingInterval) -> list:
    """Breakpoints of the case analysis, restricted to the open interval (L, R)."""
    m, b = params.m, params.b
    e0 = di.epsilons[0]
    pts = [1 / b, 1 / b + e0, 2 / b, switch_right(params), switch_right(params) - e0]
    for i in range(1, m + 1):
        pts += [i / b, choice_upper(params, i)]
    for i in range(1, m):
        pts.append((i + 1) / b + di.epsilons[i])
        pts.append(choice_upper(params, i) - di.epsilons[i])
    for i, v in di.eps_star.items():
        pts += [(i + 1) / b + v, choice_upper(params, i) - v]
    inside = {p for p in pts if di.L < p < di.R}
    return [di.L] + sorted(inside) + [di.R]


@dataclass(frozen=True)
class CoverPiece:
    lo: object
    hi: object
    word_a: tuple
    word_b: tuple


@dataclass(frozen=True)
class DoublingCertificate:
    n_beta: int
    L: object
    R: object
    pieces: tuple

    def locate(self, y) -> CoverPiece:
        los = [p.lo for p in self.pieces]
        idx = bisect.bisect_right(los, y) - 1
        piece = self.pieces[max(idx, 0)]
        if not (piece.lo <= y <= piece.hi):
            raise PointOutsideI(f"{float(y):.12g} not covered")
        return piece


class _Budget(Exception):
    pass


def _two_words(params: ExpansionParams, di: DoublingInterval, lo, hi, n: int, powers: list):
    """Two distinct length-n words sending [lo, hi] into J through I, or None."""
    b, m = params.b, params.m
    right = params.right_end
    L, R = di.L, di.R
    span = R - L
    mid = float(L + R) / 2
    bf = float(b)
    found: list = []
    nodes = 0

    def dfs(lo, hi, depth, word) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > NODE_BUDGET:
            raise _Budget
        if depth == n:
            if L <= lo and hi <= R:
                found.append(tuple(word))
            return len(found) >= 2
        if (hi - lo) * powers[n - depth] > span:
            return False
        blo, bhi = b * lo, b * hi
        first = max(0, ceil_scalar(bhi - right, 0))
        last = min(m, floor_scalar(blo, 0))
        centre = (float(lo) + float(hi)) / 2 * bf
        for d in sorted(range(first, last + 1), key=lambda d: (abs(centre - d - mid), d)):
            word.append(d)
            if dfs(blo - d, bhi - d, depth + 1, word):
                return True
            word.pop()
        return False

    try:
        dfs(lo, hi, 0, [])
    except _Budget:
        return None
    return tuple(found) if len(found) >= 2 else None


def _cover(params: ExpansionParams, di: DoublingInterval, n: int) -> Optional[list]:
    powers = [params.point(1)]
    for _ in range(n):
        powers.append(powers[-1] * params.b)
    min_width = (di.R - di.L) * MIN_PIECE_FRACTION
    seeds = _seed_points(params, di)
    stack = [(seeds[i], seeds[i + 1]) for i in range(len(seeds) - 1)][::-1]
    pieces = []
    while stack:
        lo, hi = stack.pop()
        words = _two_words(params, di, lo, hi, n, powers)
        if words is not None:
            pieces.append(CoverPiece(lo, hi, words[0], words[1]))
            continue
        if hi - lo < min_width:
            return None
        midpoint = (lo + hi) / 2
        stack.append((midpoint, hi))
        stack.append((lo, midpoint))
    return pieces


def certify_n_beta(di: DoublingInterval, params: ExpansionParams, max_length: int = MAX_WORD_LENGTH) -> DoublingCertificate:
    """Smallest word length n for which the adaptive cover certifies."""
    for n in range(1, max_length + 1):
        pieces = _cover(params, di, n)
        if pieces is not None:
            return DoublingCertificate(n, di.L, di.R, tuple(pieces))
    raise CertificationFailure(f"no cover with words of length <= {max_length}", (di.L, di.R))


def _image(params: ExpansionParams, lo, hi, word: tuple):
    right = params.right_end
    for d in word:
        lo, hi = apply_map(params, d, lo), apply_map(params, d, hi)
        if lo < 0 or hi > right:
            return None
    return lo, hi


def verify_certificate(cert: DoublingCertificate, params: ExpansionParams) -> bool:
    """Independent check of contiguity, word lengths and every exact affine image."""
    if not cert.pieces or cert.pieces[0].lo != cert.L or cert.pieces[-1].hi != cert.R:
        return False
    for prev, nxt in zip(cert.pieces, cert.pieces[1:]):
        if prev.hi != nxt.lo:
            return False
    for p in cert.pieces:
        if p.word_a == p.word_b or len(p.word_a) != cert.n_beta or len(p.word_b) != cert.n_beta:
            return False
        for w in (p.word_a, p.word_b):
            img = _image(params, p.lo, p.hi, w)
            if img is None or img[0] < cert.L or img[1] > cert.R:
                return False
    return True


def switch_horizon(params: ExpansionParams, di: DoublingInterval) -> int:
    """Steps for T_0 or T_m to push a point out of the gap between J and the ends of I."""
    gap = min(float(di.L), float(params.right_end - di.R))
    return math.ceil(math.log(float(params.right_end) / gap) / math.log(float(params.b))) + 1


def j_of_x(params: ExpansionParams, di: DoublingInterval, x) -> tuple[int, tuple]:
    """Fewest steps mapping x into J, and the lexicographically least such prefix."""
    y = params.point(x)
    horizon = switch_horizon(params, di) + 64
    frontier = {y: ()}
    for t in range(horizon + 1):
        hits = [w for p, w in frontier.items() if di.contains(p)]
        if hits:
            return t, min(hits)
        nxt: dict = {}
        b = params.b
        for p, w in frontier.items():
            for d in _digits_or_raise(params, p):
                z = b * p - d
                cand = w + (d,)
                if z not in nxt or cand < nxt[z]:
                    nxt[z] = cand
        frontier = nxt
    raise JxNotFound(f"{float(y):.12g} does not reach J within {horizon} steps")


def generate_prefixes(params: ExpansionParams, cert: DoublingCertificate, x, n: int, j: Optional[tuple] = None) -> list[tuple]:
    """The length-n prefixes produced by the doubling algorithm started at x."""
    di = DoublingInterval(cert.L, cert.R, {}, {}, "", cert.n_beta)
    jx, path = j if j is not None else j_of_x(params, di, x)
    y = params.point(x)
    for d in path:
        y = params.b * y - d
    words = [(path, y)]
    while len(words[0][0]) < n:
        nxt = []
        for w, p in words:
            piece = cert.locate(p)
            for u in (piece.word_a, piece.word_b):
                z = p
                for d in u:
                    z = params.b * z - d
                nxt.append((w + u, z))
        words = nxt
    return sorted({w[:n] for w, _ in words})


def prefix_count_lower_bound(params: ExpansionParams, di: DoublingInterval, x, n: int,
                             frontier_limit: int = FRONTIER_LIMIT) -> tuple[int, bool]:
    """A lower bound on N_n(x) and whether it is exact.

    Orbits are followed exactly while the frontier stays small; after that
    each frontier point inside J contributes 2^floor(remaining / n_beta).
    """
    if di.n_beta is None:
        raise ValueError("doubling interval has no certified n_beta")
    y0 = params.point(x)
    b = params.b
    frontier = {y0: 1}
    for depth in range(n):
        nxt: dict = {}
        for y, mult in frontier.items():
            by = b * y
            for i in _digits_or_raise(params, y):
                z = by - i
                nxt[z] = nxt.get(z, 0) + mult
        if len(nxt) > frontier_limit:
            rest = n - depth
            boost = 2 ** (rest // di.n_beta)
            return sum(mult * (boost if di.contains(y) else 1) for y, mult in frontier.items()), False
        frontier = nxt
    return sum(frontier.values()), True


@dataclass(frozen=True)
class DimensionBound:
    x: object
    n_beta: int
    lower_bound: float
    j_x: int
    depth: int
    count_lower: int
    count_exact: bool
    empirical_lower: float
    certificate: DoublingCertificate


def dimension_lower_bound(params: ExpansionParams, x, depth: int = 40) -> DimensionBound:
    """log_{m+1} 2 / n_beta, with log_{m+1} N_depth(x) / depth for comparison.

    When N_depth(x) is too large to enumerate, the comparison uses a
    certified lower bound on it, so ``empirical_lower`` never overstates.
    """
    _check_below_golden(params)
    y = params.point(x)
    if not (0 < y < params.right_end):
        raise PointOutsideI("x must lie in the open interval (0, m/(beta-1))")
    di = build_doubling_interval(params)
    cert = certify_n_beta(di, params)
    di = replace(di, n_beta=cert.n_beta)
    jx, _ = j_of_x(params, di, y)
    count, exact = prefix_count_lower_bound(params, di, y, depth)
    m = params.m
    return DimensionBound(
        x=y,
        n_beta=cert.n_beta,
        lower_bound=math.log(2, m + 1) / cert.n_beta,
        j_x=jx,
        depth=depth,
        count_lower=count,
        count_exact=exact,
        empirical_lower=math.log(count, m + 1) / depth,
        certificate=cert,
    )
