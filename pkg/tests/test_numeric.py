import mpmath
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from beta_forge.errors import BetaNotGreaterThanOne, IncompatibleField, MultipleRoots, NoSignChange
from beta_forge.numeric import (
    CertifiedValue,
    Enclosure,
    IntPolynomial,
    NumberField,
    algebraic_compare,
    eval_tail_bounded_series,
    isolate_root,
    rational,
)
from beta_forge.words import DigitSequence

GOLDEN = IntPolynomial((-1, -1, 1))
CUBIC = IntPolynomial((-1, 1, -2, 1))


def test_rational_parsing():
    assert rational("3/6") == mpq(1, 2)
    assert rational("1.25") == mpq(5, 4)
    assert rational(0.5) == mpq(1, 2)
    assert rational(7) == 7


def test_polynomial_normalises_and_evaluates():
    p = IntPolynomial((1, 2, 0, 0))
    assert p.degree == 1
    assert p(mpq(1, 2)) == 2
    assert str(GOLDEN)
    assert GOLDEN.is_squarefree()
    assert not IntPolynomial((1, 2, 1)).is_squarefree()


def test_isolate_golden_ratio():
    r = isolate_root(GOLDEN, 1, 2, mpq(1, 10**6))
    assert r.isolating_hi - r.isolating_lo <= mpq(1, 10**6)
    assert abs(float(r) - 1.618034) < 1e-6


def test_isolate_linear_is_exact():
    r = isolate_root(IntPolynomial((-2, 1)), 1, 3)
    assert r.is_rational() and r.as_rational() == 2


def test_isolate_cubic():
    r = isolate_root(CUBIC, 1, 2, mpq(1, 10**6))
    assert abs(float(r) - 1.754878) < 1e-6


def test_isolate_errors():
    with pytest.raises(NoSignChange):
        isolate_root(GOLDEN, 2, 3)
    # x^3 - x has roots -1, 0, 1: sign change on (-2, 2) but three roots
    with pytest.raises(MultipleRoots):
        isolate_root(IntPolynomial((0, -1, 0, 1)), -2, mpq(3, 2))


def test_root_refinement_is_nested():
    prev = None
    for e in range(4, 30, 3):
        r = isolate_root(CUBIC, 1, 2, mpq(1, 2**e))
        lo, hi = r.isolating_lo, r.isolating_hi
        if prev is not None:
            assert prev[0] <= lo and hi <= prev[1]
        prev = (lo, hi)


@pytest.mark.parametrize("poly,lo,hi", [(GOLDEN, 1, 2), (CUBIC, 1, 2), (IntPolynomial((-3, -4, 1)), 4, 5)])
def test_residual_bounded_by_lipschitz(poly, lo, hi):
    r = isolate_root(poly, lo, hi, mpq(1, 10**8))
    a, b = r.isolating_lo, r.isolating_hi
    mid = (a + b) / 2
    assert abs(poly(mid)) <= poly.lipschitz_bound(a, b) * (b - a)


def test_compare_identity_and_reduction():
    beta = isolate_root(GOLDEN, 1, 2)
    assert algebraic_compare(beta, beta) == 0
    assert algebraic_compare(beta**2, beta + 1) == 0
    assert algebraic_compare(1 / (beta - 1), beta) == 0
    assert algebraic_compare(beta, beta - mpq(1, 10**30)) == 1


def test_compare_incompatible_fields():
    a = isolate_root(GOLDEN, 1, 2)
    b = isolate_root(CUBIC, 1, 2)
    with pytest.raises(IncompatibleField):
        algebraic_compare(a, b)


def test_conjugate_root_is_a_different_field():
    a = isolate_root(GOLDEN, 1, 2)
    b = isolate_root(GOLDEN, -1, 0)
    with pytest.raises(IncompatibleField):
        algebraic_compare(a, b)


def test_sign_of_tiny_difference_against_mpmath():
    beta = isolate_root(CUBIC, 1, 2)
    mpmath.mp.dps = 60
    ref = mpmath.findroot(lambda x: x**3 - 2 * x**2 + x - 1, 1.75)
    q = rational(mpmath.nstr(ref, 40))
    d = beta - q
    assert d.sign() == (1 if ref > mpmath.mpf(q.numerator) / q.denominator else -1)


coeff = st.fractions(min_value=-20, max_value=20, max_denominator=30)


def _field_axioms(field, xs, ys, zs):
    x, y, z = field.element(xs), field.element(ys), field.element(zs)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if x != 0:
        assert x * (1 / x) == 1


@settings(max_examples=1000, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=2), st.lists(coeff, min_size=2, max_size=2),
       st.lists(coeff, min_size=2, max_size=2))
def test_field_axioms_golden(xs, ys, zs):
    _field_axioms(NumberField(GOLDEN, 1, 2), xs, ys, zs)


@settings(max_examples=1000, deadline=None)
@given(st.lists(coeff, min_size=3, max_size=3), st.lists(coeff, min_size=3, max_size=3),
       st.lists(coeff, min_size=3, max_size=3))
def test_field_axioms_cubic(xs, ys, zs):
    _field_axioms(NumberField(CUBIC, 1, 2), xs, ys, zs)


@settings(max_examples=200, deadline=None)
@given(st.lists(coeff, min_size=3, max_size=3))
def test_float_value_matches_mpmath(cs):
    field = NumberField(CUBIC, 1, 2)
    x = field.element(cs)
    mpmath.mp.dps = 40
    r = mpmath.findroot(lambda t: t**3 - 2 * t**2 + t - 1, 1.75)
    ref = sum(mpmath.mpf(c.numerator) / c.denominator * r**i for i, c in enumerate(cs))
    lo, hi = x.enclosure(120)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= ref + mpmath.mpf(10) ** -30
    assert ref - mpmath.mpf(10) ** -30 <= mpmath.mpf(hi.numerator) / hi.denominator


def test_series_geometric_at_two():
    s = eval_tail_bounded_series(DigitSequence.periodic((1,), 1), CertifiedValue.exact(2), 50)
    assert s.lower() <= 1 <= s.upper()
    assert s.lower() >= 1 - mpq(1, 2**49)


def test_series_thue_morse_at_table_value():
    from beta_forge.constants import generalized_thue_morse

    s = eval_tail_bounded_series(generalized_thue_morse(1, 400), CertifiedValue.exact(mpq(178723, 100000)), 400)
    assert abs(float(s.value) - 1) < 1e-5


def test_series_even_word_at_its_root():
    # lambda(2) = 2,1,0,2,0,1,... summed at the certified root of its own series
    from beta_forge.constants import beta_c, generalized_thue_morse

    b = beta_c(2, mpq(1, 10**12))
    s = eval_tail_bounded_series(generalized_thue_morse(2, 200), b, 200)
    assert abs(float(s.value) - 1) < 1e-5


def test_series_truncations_overlap():
    word = DigitSequence.periodic((2, 0, 1), 2)
    beta = CertifiedValue.exact(mpq(5, 2))
    for n in (5, 20, 60):
        a = eval_tail_bounded_series(word, beta, n)
        b = eval_tail_bounded_series(word, beta, n + 10)
        assert a.lower() <= b.upper() and b.lower() <= a.upper()


def test_series_rejects_beta_at_most_one():
    with pytest.raises(BetaNotGreaterThanOne):
        eval_tail_bounded_series((1, 1), CertifiedValue.exact(1), 2, alphabet_max=1)


def test_enclosure_arithmetic_contains_true_value():
    a = Enclosure.of(mpq(1, 3))
    b = Enclosure.of(mpq(2, 7))
    for enc, exact in [(a + b, mpq(13, 21)), (a * b, mpq(2, 21)), (a / b, mpq(7, 6)), (a - b, mpq(1, 21))]:
        assert enc.contains(exact)


def test_enclosure_compare_respects_guard():
    a = Enclosure.of(mpq(1, 3))
    assert a.compare(mpq(1, 3) + mpq(1, 10**15)) is None
    assert a.compare(mpq(1, 2)) == -1
