"""Divisor-sum core: frozen values, independent oracles, sieve consistency."""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, isqrt

import numpy as np
import pytest

from harmonia.arith import (
    ArithmeticProfile,
    SegmentationRequired,
    abundancy_ratio,
    factorize,
    merge_factorizations,
    primes_upto,
    product_of,
    ratio_sum,
    read_profile_cache,
    sieve_range,
    sieve_tables,
    sigma_of,
    sigma_star_of,
    write_profile_cache,
)

ORACLE_LIMIT = 10**6


def oracle_sigma_table(limit: int) -> np.ndarray:
    """Divisor enumeration: add every d to all of its multiples.

    Independent of the multiplicative sieve under test (no factoring at all).
    Index n, entries valid for 1 <= n <= limit.
    """
    table = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        table[d::d] += d
    return table


def oracle_sigma_single(n: int) -> int:
    """Pure python divisor enumeration for one n."""
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            total += d
            if d != n // d:
                total += n // d
    return total


def oracle_sigma_star_single(n: int) -> int:
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            e = n // d
            if gcd(d, e) == 1:
                total += d
                if d != e:
                    total += e
    return total


@pytest.fixture(scope="module")
def oracle_table() -> np.ndarray:
    return oracle_sigma_table(ORACLE_LIMIT)


@pytest.fixture(scope="module")
def sieved():
    return sieve_tables(1, ORACLE_LIMIT, star=True, counts=True)


def test_sigma_frozen_values() -> None:
    assert sigma_of(factorize(64)) == 127
    assert sigma_of(factorize(220)) == 504
    assert sigma_of(factorize(284)) == 504
    assert sigma_star_of(factorize(12)) == 20
    assert sigma_of(factorize(1)) == 1
    assert sigma_star_of(factorize(1)) == 1


def test_factorize_frozen_values() -> None:
    assert factorize(173369889) == ((3, 4), (7, 2), (11, 2), (19, 2))
    assert factorize(3472) == ((2, 4), (7, 1), (31, 1))
    assert factorize(1) == ()
    assert factorize(2) == ((2, 1),)
    # sigma of the big member, cross-checked by hand: 121*57*133*381
    assert sigma_of(factorize(173369889)) == 349491681
    assert 121 * 57 * 133 * 381 == 349491681


def test_factorize_round_trip() -> None:
    rng = random.Random(12345)
    samples = list(range(1, 2000)) + [rng.randrange(1, 10**9) for _ in range(200)]
    for n in samples:
        f = factorize(n)
        assert product_of(f) == n
        assert all(e >= 1 for _, e in f)
        primes = [p for p, _ in f]
        assert primes == sorted(primes)
        assert len(set(primes)) == len(primes)


def test_factorize_rejects_bad_input() -> None:
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(1 << 70)


def test_merge_factorizations() -> None:
    f = merge_factorizations(factorize(64), factorize(173369889))
    assert f == ((2, 6), (3, 4), (7, 2), (11, 2), (19, 2))
    assert sigma_of(f) == 127 * 349491681


def test_sieve_sigma_against_divisor_enumeration(oracle_table, sieved) -> None:
    # full agreement on [1, 10^6] between the multiplicative sieve and the
    # divisor-enumeration oracle
    assert np.array_equal(sieved.sigma, oracle_table[1:])


def test_sieve_against_single_n_oracles(sieved) -> None:
    rng = random.Random(777)
    samples = list(range(1, 300)) + [rng.randrange(1, ORACLE_LIMIT) for _ in range(120)]
    for n in samples:
        i = sieved.index(n)
        assert int(sieved.sigma[i]) == oracle_sigma_single(n)
        assert int(sieved.sigma_star[i]) == oracle_sigma_star_single(n)
        f = factorize(n)
        assert int(sieved.omega[i]) == len(f)
        assert int(sieved.big_omega[i]) == sum(e for _, e in f)


def test_sigma_multiplicative_on_coprime_pairs(sieved) -> None:
    rng = random.Random(99)
    checked = 0
    while checked < 400:
        a = rng.randrange(2, 10**4)
        b = rng.randrange(2, ORACLE_LIMIT // a)
        if gcd(a, b) != 1:
            continue
        ia, ib, iab = sieved.index(a), sieved.index(b), sieved.index(a * b)
        assert sieved.sigma[iab] == sieved.sigma[ia] * sieved.sigma[ib]
        assert sieved.sigma_star[iab] == sieved.sigma_star[ia] * sieved.sigma_star[ib]
        checked += 1


def test_sigma_star_le_sigma_equality_iff_squarefree(sieved) -> None:
    lim = 10**4
    star = sieved.sigma_star[:lim]
    sig = sieved.sigma[:lim]
    assert np.all(star <= sig)
    for n in range(1, lim + 1):
        squarefree = all(e == 1 for _, e in factorize(n))
        assert (sig[n - 1] == star[n - 1]) == squarefree


def test_segmented_sieve_matches_whole_range() -> None:
    whole = sieve_tables(1, 30000, star=True, counts=True)
    cuts = [1, 7, 4096, 9999, 10000, 25007, 30000]
    ps = primes_upto(isqrt(30000))
    for lo, hi in zip(cuts, cuts[1:]):
        seg = sieve_tables(lo, hi, star=True, counts=True, primes=ps)
        sl = slice(lo - 1, hi)
        assert np.array_equal(seg.sigma, whole.sigma[sl])
        assert np.array_equal(seg.sigma_star, whole.sigma_star[sl])
        assert np.array_equal(seg.omega, whole.omega[sl])
        assert np.array_equal(seg.big_omega, whole.big_omega[sl])


def test_sieve_range_profiles() -> None:
    profiles = sieve_range(60, 70)
    by_n = {p.n: p for p in profiles}
    assert by_n[64] == ArithmeticProfile(64, 127, 65, 1, 6)
    assert by_n[64].factorization == ((2, 6),)
    assert by_n[60].sigma == 168
    assert len(profiles) == 11
    one = sieve_range(1, 1)[0]
    assert (one.sigma, one.sigma_star, one.omega, one.big_omega) == (1, 1, 0, 0)
    assert one.factorization == ()


def test_sieve_range_budget() -> None:
    with pytest.raises(SegmentationRequired):
        sieve_range(1, 10**6, budget=1 << 10)


def test_profile_of_matches_sieve(sieved) -> None:
    for n in (1, 2, 64, 135, 3472, 173369889 % ORACLE_LIMIT + 2):
        p = ArithmeticProfile.of(n)
        i = sieved.index(n)
        assert (p.sigma, p.sigma_star) == (int(sieved.sigma[i]), int(sieved.sigma_star[i]))


def test_abundancy_ratio_reduction_and_identity() -> None:
    assert abundancy_ratio(135, 240) == Fraction(9, 16)
    assert abundancy_ratio(1, 1) == Fraction(1)
    r = abundancy_ratio(6, 12)
    assert (r.numerator, r.denominator) == (1, 2)
    # hashable and orderable
    assert len({abundancy_ratio(2, 3), abundancy_ratio(4, 6)}) == 1
    assert abundancy_ratio(1, 3) < abundancy_ratio(1, 2)
    with pytest.raises(ValueError):
        abundancy_ratio(0, 5)


def test_ratio_sum_exact_and_order_free() -> None:
    rs = [Fraction(2, 3), Fraction(3, 4)]
    assert ratio_sum(rs) == Fraction(17, 12)
    assert ratio_sum(reversed(rs)) == Fraction(17, 12)
    assert ratio_sum([]) == 0
    many = [Fraction(1, d) for d in range(2, 40)]
    rng = random.Random(5)
    shuffled = many[:]
    rng.shuffle(shuffled)
    assert ratio_sum(many) == ratio_sum(shuffled)


def test_primes_upto() -> None:
    assert primes_upto(1).size == 0
    assert primes_upto(2).tolist() == [2]
    assert primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_upto(10**6)) == 78498


def test_profile_cache_round_trip(tmp_path) -> None:
    t = sieve_tables(100, 4000, star=True, counts=True)
    path = str(tmp_path / "seg.harm")
    write_profile_cache(path, t)
    back = read_profile_cache(path)
    assert (back.lo, back.hi) == (100, 4000)
    assert np.array_equal(back.sigma, t.sigma)
    assert np.array_equal(back.sigma_star, t.sigma_star)
    assert np.array_equal(back.omega, t.omega)
    assert np.array_equal(back.big_omega, t.big_omega)
    # header is 16 bytes, records 40 bytes each
    import os

    assert os.path.getsize(path) == 16 + 40 * (4000 - 100 + 1)


def test_profile_cache_rejects_corruption(tmp_path) -> None:
    t = sieve_tables(1, 50, star=True, counts=True)
    path = str(tmp_path / "seg.harm")
    write_profile_cache(path, t)
    raw = bytearray(open(path, "rb").read())
    raw[0] = ord("X")
    bad = str(tmp_path / "bad.harm")
    open(bad, "wb").write(bytes(raw))
    with pytest.raises(ValueError):
        read_profile_cache(bad)
    trunc = str(tmp_path / "trunc.harm")
    open(trunc, "wb").write(bytes(open(path, "rb").read()[:-40]))
    with pytest.raises(ValueError):
        read_profile_cache(trunc)
