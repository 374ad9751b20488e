import math
import random
from dataclasses import replace

import pytest
from gmpy2 import mpq

from beta_forge.constants import golden_ratio
from beta_forge.dimension import (
    CoverPiece,
    DoublingCertificate,
    build_doubling_interval,
    certify_n_beta,
    dimension_lower_bound,
    epsilon_schedule,
    generate_prefixes,
    j_of_x,
    parity_case,
    prefix_count_lower_bound,
    verify_certificate,
)
from beta_forge.errors import (
    BetaNotExact,
    CertificationFailure,
    NotBelowGoldenRatio,
    PointOutsideI,
)
from beta_forge.expansions import count_prefixes, expand_tree
from beta_forge.geometry import ExpansionParams, apply_map, switch_right
from beta_forge.numeric import CertifiedValue

CASES = [(1, mpq(3, 2)), (2, mpq(9, 5)), (3, mpq(13, 5)), (4, mpq(29, 10))]


@pytest.fixture(scope="module")
def certified():
    out = {}
    for m, beta in CASES:
        p = ExpansionParams(m, beta)
        di = build_doubling_interval(p)
        cert = certify_n_beta(di, p)
        out[m] = (p, replace(di, n_beta=cert.n_beta), cert)
    return out


def _interior(lo, hi, rng):
    return lo + (hi - lo) * mpq(rng.randint(1, 9999), 10000)


def test_epsilon_example():
    p = ExpansionParams(2, mpq(9, 5))
    eps, star = epsilon_schedule(p)
    b = p.beta
    assert eps[1] == (2 / (b * (b - 1)) - 2 / b) / 2
    assert abs(float(eps[1]) - 0.138889) < 1e-6
    assert star == {}


@pytest.mark.parametrize("k", [1, 2])
def test_epsilons_vanish_at_the_golden_ratio(k):
    m = 2 * k
    prev = None
    for j in range(2, 9):
        eps, _ = epsilon_schedule(ExpansionParams(m, mpq(k + 1) - mpq(1, 10**j)))
        tight = min(v for i, v in eps.items() if i > 0)
        assert tight > 0
        if prev is not None:
            assert tight < prev
        prev = tight
    assert prev < mpq(1, 10**7)


def test_parity_cases():
    assert parity_case(ExpansionParams(1, mpq(3, 2))) == "even"
    assert parity_case(ExpansionParams(4, mpq(29, 10))) == "even"
    assert parity_case(ExpansionParams(3, mpq(13, 5))) == "odd_high"
    assert parity_case(ExpansionParams(3, mpq(12, 5))) == "odd_low"


@pytest.mark.parametrize("m,beta", [(2, mpq(9, 5)), (1, mpq(3, 2)), (3, mpq(13, 5)), (5, mpq(37, 10))])
def test_doubling_interval_contains_switch_region(m, beta):
    p = ExpansionParams(m, beta)
    di = build_doubling_interval(p)
    assert di.L <= 1 / p.beta and di.R >= switch_right(p)
    assert 0 < di.L < di.R < p.right_end


def test_golden_mean_region_example():
    di = build_doubling_interval(ExpansionParams(1, mpq(3, 2)))
    assert di.L <= mpq(2, 3) and di.R >= mpq(4, 3)


def test_odd_candidate_bounds_left_end():
    p = ExpansionParams(3, mpq(13, 5))
    b = p.beta
    di = build_doubling_interval(p)
    assert di.L <= apply_map(p, 2, (b + 2) / (b * b - 1))


def test_construction_errors():
    with pytest.raises(NotBelowGoldenRatio):
        build_doubling_interval(ExpansionParams(2, 2))
    with pytest.raises(NotBelowGoldenRatio):
        epsilon_schedule(ExpansionParams(3, golden_ratio(3)))
    with pytest.raises(BetaNotExact):
        build_doubling_interval(ExpansionParams(2, CertifiedValue.exact(mpq(9, 5))))
    p = ExpansionParams(1, mpq(3, 2))
    with pytest.raises(CertificationFailure):
        certify_n_beta(build_doubling_interval(p), p, max_length=2)


def test_certificate_soundness(certified):
    for m, (p, di, cert) in certified.items():
        assert verify_certificate(cert, p)
        assert math.log(2, m + 1) / cert.n_beta > 0
        # every piece, both words: exact images step by step
        for piece in cert.pieces:
            for w in (piece.word_a, piece.word_b):
                lo, hi = piece.lo, piece.hi
                for d in w:
                    lo, hi = apply_map(p, d, lo), apply_map(p, d, hi)
                    assert 0 <= lo and hi <= p.right_end
                assert di.L <= lo and hi <= di.R


def test_tampered_certificates_are_rejected(certified):
    p, _, cert = certified[2]
    first = cert.pieces[0]
    same = CoverPiece(first.lo, first.hi, first.word_a, first.word_a)
    assert not verify_certificate(replace(cert, pieces=(same,) + cert.pieces[1:]), p)
    assert not verify_certificate(replace(cert, pieces=cert.pieces[1:]), p)
    bad = CoverPiece(first.lo, first.hi, (p.m,) * cert.n_beta, first.word_b)
    assert not verify_certificate(replace(cert, pieces=(bad,) + cert.pieces[1:]), p)
    assert not verify_certificate(DoublingCertificate(cert.n_beta, cert.L, cert.R, ()), p)


def test_golden_mean_certificate_against_tree(certified):
    p, di, cert = certified[1]
    assert cert.n_beta <= 10
    rng = random.Random(5)
    for _ in range(10_000):
        x = _interior(di.L, di.R, rng)
        tree = expand_tree(p, x, cert.n_beta)
        assert sum(1 for node in tree.levels[-1] if di.contains(node.point)) >= 2


def test_trimmed_switch_region_returns_in_one_step(certified):
    p, di, _ = certified[1]
    e0 = di.epsilons[0]
    rng = random.Random(6)
    for _ in range(200):
        x = _interior(1 / p.beta + e0, switch_right(p) - e0, rng)
        assert di.contains(apply_map(p, 0, x)) and di.contains(apply_map(p, 1, x))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_generated_prefixes_obey_the_counting_bound(certified, m):
    p, di, cert = certified[m]
    rng = random.Random(10 + m)
    for _ in range(5):
        x = _interior(0, p.right_end, rng)
        j = j_of_x(p, di, x)
        depth = min(3 * cert.n_beta, 14)
        valid = expand_tree(p, x, depth).prefixes()
        for n in range(1, 3 * cert.n_beta + 1):
            words = generate_prefixes(p, cert, x, n, j)
            assert len(words) >= 2 ** ((n - j[0]) // cert.n_beta - 1)
            if n <= depth:
                assert set(words) <= {v[:n] for v in valid}


def test_generated_prefixes_are_real_prefixes(certified):
    p, di, cert = certified[2]
    x = mpq(7, 10)
    n = 12
    words = generate_prefixes(p, cert, x, n)
    valid = set(expand_tree(p, x, n).prefixes())
    assert words and set(words) <= valid


def test_j_of_x_inside_interval_is_zero(certified):
    p, di, _ = certified[3]
    assert j_of_x(p, di, (di.L + di.R) / 2)[0] == 0
    t, path = j_of_x(p, di, p.right_end / 1000)
    assert t == len(path) > 0


def test_count_lower_bound_is_exact_for_small_depth(certified):
    p, di, _ = certified[2]
    x = mpq(7, 10)
    count, exact = prefix_count_lower_bound(p, di, x, 10)
    assert exact and count == count_prefixes(p, x, 10).count
    count, exact = prefix_count_lower_bound(p, di, x, 14, frontier_limit=200)
    assert not exact and count <= count_prefixes(p, x, 14).count


def test_dimension_examples():
    b = dimension_lower_bound(ExpansionParams(1, mpq(3, 2)), mpq(9, 10))
    assert b.lower_bound == 1 / b.n_beta
    b2 = dimension_lower_bound(ExpansionParams(2, mpq(9, 5)), mpq(7, 10), depth=30)
    assert b2.lower_bound == math.log(2, 3) / b2.n_beta
    # empirical_lower comes from a certified lower bound on N_30, so this is the stronger check
    assert b2.lower_bound <= b2.empirical_lower


def test_dimension_rejects_endpoints():
    p = ExpansionParams(1, mpq(3, 2))
    with pytest.raises(PointOutsideI):
        dimension_lower_bound(p, 0)
    with pytest.raises(PointOutsideI):
        dimension_lower_bound(p, p.right_end)


@pytest.mark.parametrize("beta", [mpq(49, 20), mpq(51, 20), mpq(99, 40)])
def test_cross_parity_paths_are_both_sound(beta):
    # near 2*beta = 2k+3 for m = 3 both constructions are tried and each must certify
    p = ExpansionParams(3, beta)
    results = {}
    for case in ("odd_low", "odd_high"):
        try:
            di = build_doubling_interval(p, case)
        except Exception:
            continue
        cert = certify_n_beta(di, p)
        assert verify_certificate(cert, p)
        results[case] = math.log(2, 4) / cert.n_beta
    assert results
    assert parity_case(p) in results
