"""Brute-force reference implementations for cross-checking.

Prefixes are enumerated over the full word space and filtered with the
remainder criterion x - sum eps_i beta^-i in [0, m / (beta^n (beta - 1))].
None of this shares enumeration code with the orbit-based counting in
``expansions``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BetaNotExact, TooLarge
from .expansions import is_admissible, quasi_greedy_one
from .geometry import ExpansionParams
from .words import DigitSequence

DEFAULT_MAX_WORDS = 10**7
MAX_TOTAL_LENGTH = 10
_CHUNK = 1 << 21
_MARGIN = 1e-9


@dataclass(frozen=True)
class OracleResult:
    """Valid prefixes of one length, stored as sorted base-(m+1) word indices."""

    n: int
    m: int
    indices: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return int(self.indices.size)

    @property
    def prefixes(self) -> list[tuple]:
        return [_decode(int(i), self.n, self.m) for i in self.indices]


def _decode(index: int, n: int, m: int) -> tuple:
    digits = []
    for _ in range(n):
        index, d = divmod(index, m + 1)
        digits.append(d)
    return tuple(reversed(digits))


def _all_sums(beta: float, m: int, length: int, offset: int) -> np.ndarray:
    """sum d_i beta^-(offset+i) over all words of the given length, lexicographic order."""
    s = np.zeros(1)
    digits = np.arange(m + 1, dtype=float)
    for i in range(1, length + 1):
        s = (s[:, None] + digits * beta ** -(offset + i)).ravel()
    return s


def _exact_remainder(params: ExpansionParams, x, word: tuple):
    b = params.b
    total = params.point(0)
    power = params.point(1)
    for d in word:
        power = power / b
        total = total + power * d
    return x - total


def _level(params: ExpansionParams, x, xf: float, n: int) -> np.ndarray:
    m = params.m
    bf = float(params.b)
    bound_f = m / (bf**n * (bf - 1))
    bound = params.point(m) / (params.b**n * (params.b - 1))
    half = n // 2
    head = _all_sums(bf, m, half, 0)
    tail = _all_sums(bf, m, n - half, half)
    rows = max(1, _CHUNK // tail.size)
    kept = []
    for r0 in range(0, head.size, rows):
        rem = xf - (head[r0:r0 + rows, None] + tail[None, :]).ravel()
        base = r0 * tail.size
        inside = (rem > _MARGIN) & (rem < bound_f - _MARGIN)
        near = ~inside & (rem >= -_MARGIN) & (rem <= bound_f + _MARGIN)
        idx = np.flatnonzero(inside) + base
        for j in np.flatnonzero(near):
            r = _exact_remainder(params, x, _decode(int(j) + base, n, m))
            if r >= 0 and r <= bound:
                idx = np.append(idx, int(j) + base)
        kept.append(idx)
    out = np.concatenate(kept) if kept else np.zeros(0, dtype=np.int64)
    return np.sort(out.astype(np.int64))


def _check(params: ExpansionParams, x, n: int, max_words: int):
    if not params.exact:
        raise BetaNotExact("the oracle needs an exactly represented beta")
    if n < 0:
        raise ValueError("depth must be nonnegative")
    if (params.m + 1) ** n > max_words:
        raise TooLarge(f"(m+1)^n = {(params.m + 1) ** n} exceeds {max_words}")
    return params.point(x)


def brute_force_prefixes(params: ExpansionParams, x, n: int, max_words: int = DEFAULT_MAX_WORDS) -> OracleResult:
    """All length-n prefixes of x, by exhaustive search over {0..m}^n."""
    x = _check(params, x, n, max_words)
    return OracleResult(n, params.m, _level(params, x, float(x), n))


def brute_force_counts(params: ExpansionParams, x, n: int, max_words: int = DEFAULT_MAX_WORDS) -> list[int]:
    """Prefix counts for every depth 0..n, each level searched independently."""
    x = _check(params, x, n, max_words)
    xf = float(x)
    return [int(_level(params, x, xf, j).size) for j in range(n + 1)]


def exhaustive_admissible_words(params: ExpansionParams, max_total_length: int) -> list[DigitSequence]:
    """Every infinite word with preperiod + period <= max_total_length whose shifts
    all lie strictly between the reflected and plain quasi-greedy expansion of 1.

    Digits of such a word lie in [m - d_1, d_1], so only that alphabet is searched.
    """
    if not params.exact:
        raise BetaNotExact("exhaustive search needs an exactly represented beta")
    if max_total_length > MAX_TOTAL_LENGTH:
        raise TooLarge(f"max_total_length {max_total_length} exceeds {MAX_TOTAL_LENGTH}")
    m = params.m
    horizon = 2 * max_total_length + 2
    d = quasi_greedy_one(params, horizon).prefix(horizon)
    dbar = tuple(m - v for v in d)
    alphabet = range(m - d[0], d[0] + 1)
    found = []
    for total in range(1, max_total_length + 1):
        for per_len in range(1, total + 1):
            for per in itertools.product(alphabet, repeat=per_len):
                if not _primitive(per):
                    continue
                for pre in itertools.product(alphabet, repeat=total - per_len):
                    if pre and pre[-1] == per[-1]:
                        continue
                    if _quick_reject(pre, per, d, dbar, horizon):
                        continue
                    w = DigitSequence(pre, per, m)
                    if is_admissible(params, w):
                        found.append(w)
    return sorted(found, key=lambda w: (len(w.preperiod) + len(w.period), w.preperiod, w.period))


def _primitive(per: tuple) -> bool:
    n = len(per)
    return all(per[:p] * (n // p) != per for p in range(1, n) if n % p == 0)


def _quick_reject(pre: tuple, per: tuple, d: tuple, dbar: tuple, horizon: int) -> bool:
    """A shift whose first digits already leave (dbar, d) lexicographically."""
    full = pre + per * (horizon // len(per) + 2)
    for s in range(len(pre) + len(per)):
        window = full[s:s + horizon]
        if window > d or window < dbar:
            return True
    return False
