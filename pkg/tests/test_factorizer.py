"""Tests for factorization and the persistent factor cache."""

from __future__ import annotations

import json
import logging
from math import prod
from pathlib import Path
import random

import gmpy2
import pytest

from e8recog.arith import is_prime
from e8recog.exceptions import CacheError, NotPrimePowerError, PreconditionError
from e8recog.factorizer import (
    FactorCache,
    as_prime_power,
    check_factorization,
    factor,
    factor_many,
    prime_divisors,
)
from e8recog.types import Factorization


def test_factor_examples() -> None:
    """Known factorizations, from trivial to rho-sized."""
    assert factor(1).factors == ()
    assert factor(49981).factors == ((151, 1), (331, 1))
    assert factor(4294967297).factors == ((641, 1), (6700417, 1))
    assert factor(2**64 - 1).factors == (
        (3, 1),
        (5, 1),
        (17, 1),
        (257, 1),
        (641, 1),
        (65537, 1),
        (6700417, 1),
    )
    assert factor(3**40).factors == ((3, 40),)


def test_factor_large_prime_pairs() -> None:
    """Cofactors beyond trial division go through rho."""
    p, q = 1_000_000_007, 1_000_000_009
    assert factor(p * q).factors == ((p, 1), (q, 1))
    assert factor(p**2 * q * 6).factors == ((2, 1), (3, 1), (p, 2), (q, 1))


def test_factor_perfect_powers() -> None:
    """Perfect powers of large primes are detected before rho."""
    assert factor(1_000_003**3).factors == ((1_000_003, 3),)
    assert factor((1_000_003 * 1_000_033) ** 2).factors == (
        (1_000_003, 2),
        (1_000_033, 2),
    )


def test_factor_with_hint() -> None:
    """A cyclotomic hint never changes the result."""
    # Phi_15(4) = 151 * 331, and 151, 331 are both 1 mod 15
    assert factor(49981, hint=15).factors == ((151, 1), (331, 1))
    # an even value whose hint excludes 2 is still split correctly
    assert factor(2 * 3 * 1_000_003, hint=15).factors == ((2, 1), (3, 1), (1_000_003, 1))


def test_factor_rejects_zero() -> None:
    """factor needs a positive input."""
    with pytest.raises(PreconditionError):
        factor(0)


def test_prime_divisors() -> None:
    """Distinct primes in ascending order."""
    assert prime_divisors(1) == ()
    assert prime_divisors(1057) == (7, 151)
    assert prime_divisors(1024) == (2,)


def test_factor_many_uses_seeds() -> None:
    """Seeded entries are returned as-is by the worker helper."""
    seed = Factorization(49981, ((151, 1), (331, 1)))
    result = factor_many({49981: 15, 1057: 7}, {49981: seed})
    assert result[49981] is seed
    assert result[1057].factors == ((7, 1), (151, 1))


def test_as_prime_power() -> None:
    """Prime powers are split into s and t; others are rejected with their factors."""
    q = as_prime_power(16)
    assert (q.s, q.t, q.q) == (2, 4, 16)
    assert not q.is_prime
    assert as_prime_power(31).is_prime
    with pytest.raises(NotPrimePowerError) as err:
        as_prime_power(12)
    assert err.value.factorization.factors == ((2, 2), (3, 1))
    assert "2^2 * 3" in str(err.value)
    with pytest.raises(NotPrimePowerError):
        as_prime_power(1)


def test_cache_stores_composites_only() -> None:
    """Composite results are stored and served; primes are not."""
    cache = FactorCache()
    factor(49981, cache)
    factor(1_000_003, cache)
    assert 49981 in cache
    assert 1_000_003 not in cache
    assert factor(49981, cache) is cache.get(49981)
    stats = cache.stats()
    assert stats.entries == 1
    assert stats.hits >= 1
    assert stats.dirty


def test_cache_lookups_disabled() -> None:
    """A cache loaded without lookups still stores but never serves."""
    cache = FactorCache(lookups=False)
    factor(49981, cache)
    assert 49981 in cache
    assert cache.get(49981) is None
    assert cache.snapshot([49981]) == {}


def test_cache_load_missing_file(cache_path: Path) -> None:
    """A missing file is an empty cache."""
    cache = FactorCache.load(cache_path)
    assert len(cache) == 0
    assert not cache.dirty


def test_cache_round_trip(cache_path: Path) -> None:
    """save then load yields identical entries."""
    cache = FactorCache(cache_path)
    factor(49981, cache)
    factor(2**64 - 1, cache)
    cache.save()
    assert not cache.dirty

    loaded = FactorCache.load(cache_path)
    assert loaded.entries() == cache.entries()
    raw = json.loads(cache_path.read_text(encoding="utf-8"))
    assert raw["49981"] == [["151", 1], ["331", 1]]
    assert not list(cache_path.parent.glob("*.tmp"))


def test_cache_drops_corrupt_entries(
    cache_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    """Entries failing the product or primality check are dropped with a warning."""
    cache_path.write_text(
        json.dumps(
            {
                "49981": [["151", 1], ["330", 1]],
                "12": [["2", 2], ["3", 1]],
                "16": [["4", 2]],
                "x": [["2", 1]],
            }
        ),
        encoding="utf-8",
    )
    with caplog.at_level(logging.WARNING):
        cache = FactorCache.load(cache_path)

    assert len(cache) == 1
    assert 12 in cache
    assert cache.stats().dropped_on_load == 3
    assert {key for key, _ in cache.rejected} == {"49981", "16", "x"}
    assert "Dropping corrupt factor cache entry 49981" in caplog.text


def test_cache_unreadable_file(cache_path: Path) -> None:
    """Invalid JSON or a non-object payload raises CacheError."""
    cache_path.write_text("{not json", encoding="utf-8")
    with pytest.raises(CacheError):
        FactorCache.load(cache_path)
    cache_path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(CacheError):
        FactorCache.load(cache_path)


def test_cache_verify_and_discard() -> None:
    """verify reports entries that were corrupted in memory."""
    cache = FactorCache()
    cache.put(Factorization(49981, ((151, 1), (331, 1))))
    cache.put(Factorization(100, ((2, 2), (5, 1))))
    problems = cache.verify()
    assert [value for value, _ in problems] == [100]
    assert cache.discard([100, 7]) == 1
    assert cache.verify() == []


def test_check_factorization() -> None:
    """The invariant checker names each kind of defect."""
    assert check_factorization(Factorization(49981, ((151, 1), (331, 1)))) is None
    assert "not prime" in check_factorization(Factorization(16, ((4, 2),)))
    assert "ascending" in check_factorization(Factorization(6, ((3, 1), (2, 1))))
    assert "differs" in check_factorization(Factorization(7, ((2, 1),)))


def _random_prime(rng: random.Random, low_bits: int, high_bits: int) -> int:
    bits = rng.randint(low_bits, high_bits)
    return int(gmpy2.next_prime(rng.getrandbits(bits) | (1 << (bits - 1))))


def _random_composites(count: int, seed: int) -> list[tuple[int, list[int]]]:
    rng = random.Random(seed)
    composites = []
    for _ in range(count):
        primes = [_random_prime(rng, 32, 36) for _ in range(rng.randint(1, 2))]
        primes.append(_random_prime(rng, 32, 64))
        composites.append((prod(primes), primes))
    return composites


def _assert_round_trip(composites: list[tuple[int, list[int]]]) -> None:
    for value, primes in composites:
        result = factor(value)
        assert result.product() == value
        assert all(is_prime(prime) for prime in result.primes)
        assert sorted(set(primes)) == list(result.primes)


def test_factor_random_composites() -> None:
    """Composites built from known 32-64 bit primes factor exactly."""
    _assert_round_trip(_random_composites(25, seed=20240601))


@pytest.mark.slow
def test_factor_random_composites_full() -> None:
    """The full thousand-composite property run."""
    _assert_round_trip(_random_composites(1000, seed=1729))
