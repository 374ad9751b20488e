"""Finite and eventually periodic digit words."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence


def _primitive_root(period: tuple) -> tuple:
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period[:d] * (n // d) == period:
            return period[:d]
    return period


@dataclass(frozen=True)
class DigitSequence:
    """preperiod . period^inf over {0..alphabet_max}; an empty period means a finite word."""

    preperiod: tuple = ()
    period: tuple = ()
    alphabet_max: int = 1

    def __post_init__(self) -> None:
        pre = tuple(int(d) for d in self.preperiod)
        per = tuple(int(d) for d in self.period)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)
        for d in pre + per:
            if not 0 <= d <= self.alphabet_max:
                raise ValueError(f"digit {d} outside 0..{self.alphabet_max}")

    @classmethod
    def finite(cls, digits: Sequence[int], alphabet_max: int) -> "DigitSequence":
        return cls(tuple(digits), (), alphabet_max)

    @classmethod
    def periodic(cls, period: Sequence[int], alphabet_max: int, preperiod: Sequence[int] = ()) -> "DigitSequence":
        if not period:
            raise ValueError("period must be nonempty")
        return cls(tuple(preperiod), tuple(period), alphabet_max)

    @property
    def is_finite(self) -> bool:
        return not self.period

    def __len__(self) -> int:
        if self.period:
            raise TypeError("infinite word has no length")
        return len(self.preperiod)

    def digit(self, i: int) -> int:
        """The i-th digit, 1-based; finite words are padded with zeros."""
        if i < 1:
            raise IndexError("digits are indexed from 1")
        j = i - 1
        if j < len(self.preperiod):
            return self.preperiod[j]
        if not self.period:
            return 0
        return self.period[(j - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> tuple:
        pre = self.preperiod[:n]
        if len(pre) == n:
            return pre
        if not self.period:
            return pre
        rest = n - len(pre)
        reps = -(-rest // len(self.period))
        return pre + (self.period * reps)[:rest]

    def __iter__(self) -> Iterator[int]:
        yield from self.preperiod
        while self.period:
            yield from self.period

    def canonical(self) -> "DigitSequence":
        """Minimal period with the preperiod absorbed as far as possible."""
        if not self.period:
            return self
        pre, per = list(self.preperiod), _primitive_root(self.period)
        while pre and pre[-1] == per[-1]:
            pre.pop()
            per = (per[-1],) + per[:-1]
        return DigitSequence(tuple(pre), per, self.alphabet_max)

    def shift(self, s: int = 1) -> "DigitSequence":
        pre, per = self.preperiod, self.period
        if s <= len(pre):
            return DigitSequence(pre[s:], per, self.alphabet_max)
        if not per:
            return DigitSequence((), (), self.alphabet_max)
        r = (s - len(pre)) % len(per)
        return DigitSequence((), per[r:] + per[:r], self.alphabet_max)

    def distinct_shifts(self) -> list["DigitSequence"]:
        """All shifts of an eventually periodic word (finitely many)."""
        if not self.period:
            raise ValueError("finite words have infinitely many trivial shifts")
        c = self.canonical()
        seen, out = set(), []
        for s in range(len(c.preperiod) + len(c.period)):
            w = c.shift(s).canonical()
            if w not in seen:
                seen.add(w)
                out.append(w)
        return out

    def reflect(self) -> "DigitSequence":
        m = self.alphabet_max
        return DigitSequence(tuple(m - d for d in self.preperiod), tuple(m - d for d in self.period), m)

    def __str__(self) -> str:
        sep = "," if self.alphabet_max > 9 else ""
        pre = sep.join(map(str, self.preperiod))
        if not self.period:
            return pre or "()"
        per = sep.join(map(str, self.period))
        return f"{pre}({per})^inf"


def compare_periodic(a: DigitSequence, b: DigitSequence) -> int:
    """Exact lexicographic comparison of two eventually periodic words."""
    if a.is_finite or b.is_finite:
        raise ValueError("compare_periodic needs infinite words")
    horizon = max(len(a.preperiod), len(b.preperiod)) + math.lcm(len(a.period), len(b.period))
    for x, y in zip(a.prefix(horizon), b.prefix(horizon)):
        if x != y:
            return -1 if x < y else 1
    return 0


def compare_prefix(a: Sequence[int], b: Sequence[int]) -> Optional[int]:
    """Lexicographic comparison on a common horizon; None on a tie."""
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return None
