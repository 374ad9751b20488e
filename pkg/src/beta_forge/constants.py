"""The constants G(m) < beta_f(m) < beta_c(m) and their growth in m."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .errors import BracketFailure
from .numeric import (
    DEFAULT_PREC,
    DEFAULT_TOL,
    AlgebraicNumber,
    CertifiedValue,
    IntPolynomial,
    NumberField,
    eval_tail_bounded_series,
    isolate_root,
    rational,
)
from .words import DigitSequence

MAX_SERIES_TERMS = 10**6


class ThueMorseGenerator:
    """Classical Thue-Morse bits lambda_0 = 0, lambda_{2i} = lambda_i, lambda_{2i+1} = 1 - lambda_i."""

    def __init__(self) -> None:
        self._bits = bytearray([0])
        self._lock = threading.Lock()

    def bits(self, n: int) -> bytes:
        """lambda_0 .. lambda_{n-1}."""
        if len(self._bits) < n:
            with self._lock:
                bits = self._bits
                while len(bits) < n:
                    bits.extend(1 - b for b in bytes(bits))
        return bytes(self._bits[:n])

    def bit(self, i: int) -> int:
        return self.bits(i + 1)[i]


THUE_MORSE = ThueMorseGenerator()


def lambda_digits(m: int, n: int) -> list[int]:
    """lambda_1(m) .. lambda_n(m)."""
    t = THUE_MORSE.bits(n + 1)
    k = m // 2
    if m == 1:
        return list(t[1:])
    if m % 2 == 0:
        return [k + t[i] - t[i - 1] for i in range(1, n + 1)]
    return [k + t[i] for i in range(1, n + 1)]


def generalized_thue_morse(m: int, n: int) -> DigitSequence:
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    return DigitSequence.finite(lambda_digits(m, n), m)


@lru_cache(maxsize=None)
def golden_ratio(m: int) -> AlgebraicNumber:
    """G(m): k+1 for m = 2k, (k+1+sqrt(k^2+6k+5))/2 for m = 2k+1."""
    if m < 1:
        raise ValueError("m must be positive")
    k = m // 2
    if m % 2 == 0:
        return NumberField(IntPolynomial((-(k + 1), 1)), k, k + 2).gen
    disc = k * k + 6 * k + 5
    s = math.isqrt(disc)
    lo = mpq(k + 1 + s, 2)
    hi = mpq(k + 2 + s, 2)
    return NumberField(IntPolynomial((-(k + 1), -(k + 1), 1)), lo, hi).gen


def golden_ratio_polynomial(m: int) -> IntPolynomial:
    k = m // 2
    if m % 2 == 0:
        return IntPolynomial((-(k + 1), 1))
    return IntPolynomial((-(k + 1), -(k + 1), 1))


def beta_f_polynomial(m: int) -> IntPolynomial:
    k = m // 2
    if m % 2 == 0:
        return IntPolynomial((-k, -(k + 1), 1))
    return IntPolynomial((-(k + 1), 1, -(k + 2), 1))


@lru_cache(maxsize=None)
def beta_f(m: int) -> AlgebraicNumber:
    """Unique root of the parity polynomial in (G(m), m+1)."""
    if m < 1:
        raise ValueError("m must be positive")
    lo = golden_ratio(m).enclosure()[0]
    return isolate_root(beta_f_polynomial(m), lo, m + 1, mpq(1, 2**20))


def _series_sign(m: int, c: mpq, prec: int, n0: int = 16):
    """Certified sign of sum lambda_i(m) c^-i - 1, or None at the term cap."""
    beta = CertifiedValue.exact(c, prec)
    n = n0
    while n <= MAX_SERIES_TERMS:
        s = eval_tail_bounded_series(lambda_digits(m, n), beta, n, alphabet_max=m, prec=prec)
        if s.lower() > 1:
            return 1
        if s.upper() < 1:
            return -1
        n *= 2
    return None


def beta_c_brackets(m: int, tol=DEFAULT_TOL):
    """Yield the nested bisection brackets (lo, hi) converging to beta_c(m)."""
    tol = rational(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    prec = max(DEFAULT_PREC, int(-math.log2(tol)) + 64)
    lo, hi = golden_ratio(m).enclosure()[0], mpq(m + 1)
    if _series_sign(m, lo, prec) != 1 or _series_sign(m, hi, prec) != -1:
        raise BracketFailure(f"no certified sign change of the beta_c series on [{lo}, {hi}]")
    yield lo, hi
    while hi - lo > tol:
        for frac in (mpq(1, 2), mpq(3, 8), mpq(5, 8)):
            c = lo + (hi - lo) * frac
            s = _series_sign(m, c, prec)
            if s is not None:
                break
        else:
            raise BracketFailure(f"undecidable series sign near {float(c)}")
        if s > 0:
            lo = c
        else:
            hi = c
        yield lo, hi


@lru_cache(maxsize=None)
def _beta_c_cached(m: int, tol: mpq) -> CertifiedValue:
    lo = hi = None
    for lo, hi in beta_c_brackets(m, tol):
        pass
    prec = max(DEFAULT_PREC, int(-math.log2(tol)) + 64)
    return CertifiedValue.from_bounds(lo, hi, prec, refine=lambda t, m=m: beta_c(m, t))


def beta_c(m: int, tol=DEFAULT_TOL) -> CertifiedValue:
    """beta_c(m), the root of sum lambda_i(m) beta^-i = 1, with error <= tol."""
    if m < 1:
        raise ValueError("m must be positive")
    return _beta_c_cached(m, rational(tol))


@dataclass(frozen=True)
class ConstantTriple:
    m: int
    g: AlgebraicNumber
    beta_f: AlgebraicNumber
    beta_c: CertifiedValue


def constant_triple(m: int, tol=DEFAULT_TOL) -> ConstantTriple:
    return ConstantTriple(m, golden_ratio(m), beta_f(m), beta_c(m, tol))


def _schur_stable(coeffs: list) -> bool:
    """All roots of sum coeffs[i] x^i strictly inside the unit disk (Schur-Cohn)."""
    c = list(coeffs)
    while len(c) > 1:
        a0, an = c[0], c[-1]
        if abs_cmp(a0, an) >= 0:
            return False
        rev = c[::-1]
        c = [an * c[i] - a0 * rev[i] for i in range(1, len(c))]
    return True


def abs_cmp(a, b) -> int:
    """Compare |a| with |b| exactly."""
    a = a if _sgn(a) >= 0 else -a
    b = b if _sgn(b) >= 0 else -b
    return _sgn(a - b)


def _sgn(x) -> int:
    if isinstance(x, AlgebraicNumber):
        return x.sign()
    return (x > 0) - (x < 0)


def conjugates_inside_unit_disk(alpha: AlgebraicNumber) -> bool:
    """True when every other root of alpha's minimal polynomial has modulus < 1.

    The polynomial is deflated by (x - alpha) over Q(alpha) and the quotient
    is tested with the Schur-Cohn recursion, so the decision is exact.
    """
    a = [alpha.field(c) for c in alpha.minpoly.coefficients]
    n = len(a) - 1
    q = [None] * n
    q[n - 1] = a[n]
    for j in range(n - 1, 0, -1):
        q[j - 1] = a[j] + alpha * q[j]
    return _schur_stable(q)


def is_pisot(alpha: AlgebraicNumber) -> bool:
    lead = alpha.minpoly.coefficients[-1]
    return abs(lead) == 1 and alpha > 1 and conjugates_inside_unit_disk(alpha)


@dataclass(frozen=True)
class AsymptoticRow:
    k: int
    g_even: AlgebraicNumber
    beta_f_even: AlgebraicNumber
    beta_c_even: CertifiedValue
    g_odd: AlgebraicNumber
    beta_f_odd: AlgebraicNumber
    beta_c_odd: CertifiedValue

    def deviations(self) -> dict[str, float]:
        k2 = self.k + 2
        return {
            "g_even-(k+1)": float(self.g_even) - (self.k + 1),
            "beta_f_even-(k+2)": float(self.beta_f_even - k2),
            "beta_c_even-(k+2)": float(self.beta_c_even.value - k2),
            "g_odd-(k+2)": float(self.g_odd - k2),
            "beta_f_odd-(k+2)": float(self.beta_f_odd - k2),
            "beta_c_odd-(k+2)": float(self.beta_c_odd.value - k2),
        }


@dataclass(frozen=True)
class AsymptoticReport:
    rows: tuple
    checks: dict

    def table(self) -> list[dict]:
        return [{"k": r.k, **r.deviations()} for r in self.rows]


def _eventually_shrinking(values: list[float], errors: list[float], k0: int) -> bool:
    for a, b, ea, eb in zip(values[k0 - 1:], values[k0:], errors[k0 - 1:], errors[k0:]):
        if not abs(b) + eb < abs(a) - ea:
            return False
    return True


def asymptotic_report(k_max: int, tol=mpq(1, 10**12), k0: int = 10) -> AsymptoticReport:
    """Deviations of G, beta_f, beta_c from k+2 for k = 1..k_max, with checks."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    rows = []
    for k in range(1, k_max + 1):
        rows.append(AsymptoticRow(
            k,
            golden_ratio(2 * k), beta_f(2 * k), beta_c(2 * k, tol),
            golden_ratio(2 * k + 1), beta_f(2 * k + 1), beta_c(2 * k + 1, tol),
        ))
    k0 = min(k0, max(1, k_max - 1))
    t = [r.deviations() for r in rows]
    col = lambda name: [d[name] for d in t]
    exact_err = [1e-15 * (r.k + 2) for r in rows]
    cert_err = [float(tol) + 1e-15 * (r.k + 2) for r in rows]
    scaled_g = [r.k * d for r, d in zip(rows, col("g_odd-(k+2)"))]
    scaled_bf = [r.k * d for r, d in zip(rows, col("beta_f_even-(k+2)"))]
    checks = {
        "g_even_is_k+1": all(r.g_even == r.k + 1 for r in rows),
        "k*(g_odd-(k+2)) bounded": max(abs(v) for v in scaled_g) <= 2,
        "k*(beta_f_even-(k+2)) bounded": max(abs(v) for v in scaled_bf) <= 3,
        "beta_c_even shrinking": _eventually_shrinking(col("beta_c_even-(k+2)"), cert_err, k0),
        "beta_f_odd shrinking": _eventually_shrinking(col("beta_f_odd-(k+2)"), exact_err, k0),
        "beta_c_odd shrinking": _eventually_shrinking(col("beta_c_odd-(k+2)"), cert_err, k0),
    }
    return AsymptoticReport(tuple(rows), checks)
