import threading

import mpmath
import pytest
from gmpy2 import mpq

from beta_forge.constants import (
    THUE_MORSE,
    ThueMorseGenerator,
    asymptotic_report,
    beta_c,
    beta_c_brackets,
    beta_f,
    beta_f_polynomial,
    generalized_thue_morse,
    golden_ratio,
    golden_ratio_polynomial,
    is_pisot,
    lambda_digits,
)
from beta_forge.numeric import IntPolynomial, isolate_root

# beta_c(m) for m = 1..10 from an mpmath root of the truncated series (see ``_mp_beta_c``),
# frozen to 8 decimals.
BETA_C = {
    1: 1.78723165, 2: 2.53594805, 3: 2.91001606, 4: 3.68593712, 5: 3.94823071,
    6: 4.76095462, 7: 4.96603609, 8: 5.80675758, 9: 5.97592098, 10: 6.83778178,
}


def _mp_beta_c(m, terms=600):
    mpmath.mp.dps = 30
    lam = lambda_digits(m, terms)
    f = lambda b: sum(d * b ** -(i + 1) for i, d in enumerate(lam)) - 1
    return mpmath.findroot(f, (float(golden_ratio(m)) + 1e-3, m + 1), solver="anderson")


def test_thue_morse_recurrence():
    bits = THUE_MORSE.bits(512)
    assert bits[:9] == bytes([0, 1, 1, 0, 1, 0, 0, 1, 1])
    for i in range(256):
        assert bits[2 * i] == bits[i]
        assert bits[2 * i + 1] == 1 - bits[i]


def test_thue_morse_concurrent_reads_agree():
    gen = ThueMorseGenerator()
    out = [None] * 8

    def work(j):
        out[j] = gen.bits(1 << (10 + j % 4))

    ts = [threading.Thread(target=work, args=(j,)) for j in range(8)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    ref = ThueMorseGenerator().bits(1 << 13)
    assert all(ref.startswith(o) for o in out)


def test_generalized_thue_morse_examples():
    assert generalized_thue_morse(3, 8).prefix(8) == (2, 2, 1, 2, 1, 1, 2, 2)
    assert generalized_thue_morse(2, 7).prefix(7) == (2, 1, 0, 2, 0, 1, 2)
    assert generalized_thue_morse(1, 12).prefix(12) == (1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0)


@pytest.mark.parametrize("m", range(1, 9))
def test_generalized_thue_morse_prefix_property(m):
    for n in range(0, 80, 7):
        assert generalized_thue_morse(m, n + 1).prefix(n) == generalized_thue_morse(m, n).prefix(n)


def test_golden_ratio_examples():
    assert golden_ratio(4) == 3
    assert abs(float(golden_ratio(1)) - 1.61803) < 1e-5
    g7 = golden_ratio(7)
    assert abs(float(g7) - 4.82843) < 1e-5
    assert (g7 - 2) ** 2 == 8


def test_beta_f_examples():
    assert (beta_f(2) - 1) ** 2 == 2
    assert abs(float(beta_f(1)) - 1.754878) < 1e-6
    assert abs(float(beta_f(3)) - 2.89329) < 1e-5
    assert (beta_f(6) - 2) ** 2 == 7


@pytest.mark.parametrize("m", range(1, 11))
def test_beta_c_against_mpmath(m):
    ref = _mp_beta_c(m)
    c = beta_c(m, mpq(1, 10**9))
    assert c.error_bound <= mpq(1, 10**9)
    assert abs(float(c.value) - float(ref)) < 2e-9
    assert abs(float(c.value) - BETA_C[m]) < 1e-8


def test_beta_c_m1_matches_published_value():
    assert abs(float(beta_c(1, mpq(1, 10**5)).value) - 1.78723) < 1e-5


def test_beta_c_brackets_are_nested():
    prev = None
    for lo, hi in beta_c_brackets(3, mpq(1, 10**8)):
        assert lo < hi
        if prev is not None:
            assert prev[0] <= lo and hi <= prev[1]
        prev = (lo, hi)


def test_beta_c_rejects_bad_input():
    with pytest.raises(ValueError):
        beta_c(0)
    with pytest.raises(ValueError):
        beta_c(2, 0)


@pytest.mark.parametrize("m", range(1, 51))
def test_strict_chain(m):
    g, f = golden_ratio(m), beta_f(m)
    c = beta_c(m, mpq(1, 10**8))
    assert g.enclosure()[1] < f.enclosure()[0]
    assert f.enclosure()[1] < c.lower()


@pytest.mark.parametrize("m", range(1, 11))
def test_pisot(m):
    assert is_pisot(beta_f(m))
    if m % 2:
        assert is_pisot(golden_ratio(m))


@pytest.mark.parametrize("m", range(1, 11))
def test_conjugates_numerically(m):
    # independent check with mpmath polyroots
    for poly, alpha in [(beta_f_polynomial(m), beta_f(m)), (golden_ratio_polynomial(m), golden_ratio(m))]:
        roots = mpmath.polyroots(list(reversed(poly.coefficients)), maxsteps=200, extraprec=100)
        others = [r for r in roots if abs(r - float(alpha)) > 1e-9]
        assert all(abs(r) < 1 for r in others)


def test_not_pisot():
    # x^2 - 3x + 1 has conjugate 0.38 but x^2 - 2x - 2 has conjugate -0.73; x^2 - 4x - 5 has -1
    assert is_pisot(isolate_root(IntPolynomial((-2, -2, 1)), 2, 3))
    assert not is_pisot(isolate_root(IntPolynomial((-5, -4, 1)), 4, 6))
    assert not is_pisot(isolate_root(IntPolynomial((-1, 0, 2)), 0, 1))


@pytest.mark.parametrize("m", [1, 5, 12, 40])
def test_closed_forms_are_roots(m):
    assert golden_ratio_polynomial(m)(golden_ratio(m)) == 0
    assert beta_f_polynomial(m)(beta_f(m)) == 0


def test_asymptotic_examples():
    rep = asymptotic_report(12)
    row1, row2 = rep.rows[0], rep.rows[1]
    assert abs(row1.deviations()["g_odd-(k+2)"] + 0.26795) < 1e-5
    assert abs(row2.deviations()["beta_f_even-(k+2)"] + 0.43845) < 1e-5
    assert all(rep.checks.values())
    assert len(rep.table()) == 12


@pytest.mark.parametrize("k", [1000, 10000])
def test_golden_odd_scaled_deviation_tends_to_minus_one(k):
    v = k * float(golden_ratio(2 * k + 1) - (k + 2))
    ref = k * ((mpmath.sqrt(k * k + 6 * k + 5) - (k + 3)) / 2)
    assert abs(v - float(ref)) < 1e-9
    assert abs(v + 1) < 3 / k


def test_asymptotic_report_rejects_small_range():
    with pytest.raises(ValueError):
        asymptotic_report(1)
