import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from erdos_check import CacheFormatError, CapacityError, DomainError, OutOfRangeError
from erdos_check import load_table, prime_count, save_table, sieve_primes
from erdos_check.sieve import MAX_LIMIT, PrimeTable, _simple_sieve, is_prime, restrict

from .oracles import is_prime_trial, primes_trial

# pi(10**n), n = 1..9, from published prime-counting tables.
PUBLISHED_PI = {
    10: 4,
    100: 25,
    1000: 168,
    10**4: 1229,
    10**5: 9592,
    10**6: 78498,
    10**7: 664579,
    10**8: 5761455,
}
PI_DEFAULT = 107126  # pi(1_400_000), frozen from this sieve and sympy.primepi


def test_small_limits():
    assert sieve_primes(10).primes.tolist() == [2, 3, 5, 7]
    assert sieve_primes(1).primes.tolist() == []
    assert sieve_primes(0).primes.tolist() == []
    assert sieve_primes(2).primes.tolist() == [2]
    assert sieve_primes(3).primes.tolist() == [2, 3]


def test_limit_100_matches_trial_division():
    table = sieve_primes(100)
    assert len(table) == 25
    assert table.primes[-1] == 97
    assert table.primes.tolist() == primes_trial(100)


@pytest.mark.parametrize("limit,expected", sorted(PUBLISHED_PI.items()))
def test_published_prime_counts(limit, expected):
    assert len(sieve_primes(limit)) == expected


def test_pi_default_threshold(table_default):
    sympy = pytest.importorskip("sympy")
    assert prime_count(table_default, 1_400_000) == PI_DEFAULT
    assert int(sympy.primepi(1_400_000)) == PI_DEFAULT


def test_trial_division_window_near_default(table_default):
    # every integer in a window below 1.4e6 is classified the same way
    lo, hi = 1_390_000, 1_400_000
    window = table_default.primes[(table_default.primes >= lo) & (table_default.primes <= hi)]
    assert window.tolist() == [n for n in range(lo, hi + 1) if is_prime_trial(n)]
    assert prime_count(table_default, hi) - prime_count(table_default, lo - 1) == len(window)


def test_prime_count_examples(table_1e4):
    assert prime_count(table_1e4, 10) == 4
    assert prime_count(table_1e4, 1) == 0
    assert prime_count(table_1e4, 0) == 0
    with pytest.raises(OutOfRangeError):
        prime_count(table_1e4, 10**4 + 1)


_PI_ORACLE = None


def _pi_oracle():
    global _PI_ORACLE
    if _PI_ORACLE is None:
        flags = np.array([is_prime_trial(n) for n in range(10**5 + 1)])
        _PI_ORACLE = np.cumsum(flags)
    return _PI_ORACLE


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**5))
def test_prime_count_vs_trial_division(table_1e5, x):
    assert prime_count(table_1e5, x) == int(_pi_oracle()[x])


@pytest.mark.parametrize("segment", [1, 7, 1000, 1 << 12, 1 << 20])
def test_segment_size_does_not_change_table(segment):
    limit = 10**6 if segment >= 1000 else 20_000
    reference = _simple_sieve(limit)
    table = sieve_primes(limit, segment=segment)
    np.testing.assert_array_equal(table.primes, reference)


@pytest.mark.parametrize("limit", [2, 3, 4, 5, 8, 9, 24, 25, 26, 48, 49, 50, 121, 1369])
def test_boundaries_around_squares(limit):
    assert sieve_primes(limit, segment=3).primes.tolist() == primes_trial(limit)


def test_logs_within_one_ulp(table_default):
    mp.dps = 40
    rng = np.random.default_rng(7)
    idx = np.concatenate((np.arange(200), rng.integers(0, len(table_default), 800)))
    for i in idx:
        p = int(table_default.primes[i])
        lg = float(table_default.logs[i])
        exact = mp.log(p)
        assert abs(mp.mpf(lg) - exact) <= math.ulp(lg)
        ratio = math.exp(lg) / p
        assert 1 - 1e-12 < ratio < 1 + 1e-12


def test_table_is_immutable(table_1e4):
    with pytest.raises(ValueError):
        table_1e4.primes[0] = 4


def test_errors():
    with pytest.raises(DomainError):
        sieve_primes(-1)
    with pytest.raises(CapacityError, match=str(MAX_LIMIT)):
        sieve_primes(MAX_LIMIT + 1)


def test_restrict(table_1e4):
    sub = restrict(table_1e4, 100)
    assert sub.limit == 100
    assert sub.primes.tolist() == primes_trial(100)


@pytest.mark.parametrize("n", [2, 3, 4, 561, 7919, 2**31 - 1, 2**61 - 1, 3215031751, 10**12 + 39])
def test_miller_rabin_agrees_with_trial(n):
    if n < 10**7:
        assert is_prime(n) == is_prime_trial(n)
    else:
        import sympy

        assert is_prime(n) == sympy.isprime(n)


def test_cache_roundtrip(tmp_path, table_default):
    path = tmp_path / "t.ptab"
    save_table(table_default, path)
    raw = path.read_bytes()
    assert raw[:5] == b"PTAB1"
    assert int.from_bytes(raw[5:13], "little") == 1_400_000
    loaded = load_table(path)
    assert loaded.limit == table_default.limit
    np.testing.assert_array_equal(loaded.primes, table_default.primes)
    np.testing.assert_array_equal(loaded.logs, table_default.logs)


def test_cache_large_gaps(tmp_path):
    # gaps above 127 and 16383 need two- and three-byte varints
    primes = np.array([2, 3, 131, 16411, 16417, 2**40 + 15], dtype=np.int64)
    assert all(is_prime(int(p)) for p in primes)
    table = PrimeTable(2**41, primes, np.log(primes.astype(float)))
    path = tmp_path / "gaps.ptab"
    save_table(table, path)
    np.testing.assert_array_equal(load_table(path).primes, primes)


def test_cache_empty(tmp_path):
    path = tmp_path / "e.ptab"
    save_table(sieve_primes(1), path)
    assert len(load_table(path)) == 0


def test_cache_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.ptab"
    path.write_bytes(b"PTAB2" + bytes(8))
    with pytest.raises(CacheFormatError):
        load_table(path)


def test_cache_rejects_composite(tmp_path):
    table = PrimeTable(100, np.array([2, 3, 9, 11]), np.log([2.0, 3.0, 9.0, 11.0]))
    path = tmp_path / "c.ptab"
    save_table(table, path)
    with pytest.raises(CacheFormatError, match="composite"):
        load_table(path)


def test_cache_rejects_truncated_varint(tmp_path):
    path = tmp_path / "t.ptab"
    path.write_bytes(b"PTAB1" + (100).to_bytes(8, "little") + bytes([2, 0x81]))
    with pytest.raises(CacheFormatError):
        load_table(path)
