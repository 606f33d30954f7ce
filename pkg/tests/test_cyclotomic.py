"""Tests for cyclotomic values and pi(E8(q))."""

from __future__ import annotations

from math import prod

import pytest

from e8recog.arith import divisors
from e8recog.const import E8_CYCLOTOMIC_INDICES, E8_DEGREE_DOUBLES
from e8recog.cyclotomic import (
    cyclotomic_index_set,
    e8_order,
    holder_values,
    phi_value,
    pi_e8,
    pi_e8_detailed,
    short_pi_polynomials,
)
from e8recog.exceptions import NotPrimePowerError, PreconditionError
from e8recog.factorizer import FactorCache, prime_divisors

from .common import PI_E8_2, trial_factor, trial_is_prime_power


def test_index_set() -> None:
    """The index set is every divisor of the degree doubles."""
    assert cyclotomic_index_set() == E8_CYCLOTOMIC_INDICES
    assert len(cyclotomic_index_set()) == 17


def test_phi_value_examples() -> None:
    """Known small values."""
    assert phi_value(1, 5) == 4
    assert phi_value(2, 7) == 8
    assert phi_value(12, 2) == 13
    assert phi_value(15, 2) == 151
    assert phi_value(15, 4) == 49981
    assert phi_value(8, 2) == 17
    assert phi_value(30, 2) == 331


def test_phi_value_rejects_bad_arguments() -> None:
    """d must be positive and q at least 2."""
    with pytest.raises(PreconditionError):
        phi_value(0, 5)
    with pytest.raises(PreconditionError):
        phi_value(3, 1)


def test_cyclotomic_product_identity() -> None:
    """prod over d | n of Phi_d(q) is q^n - 1 for n <= 30, q <= 50."""
    for q in range(2, 51):
        for n in range(1, 31):
            assert prod(phi_value(d, q) for d in divisors(n)) == q**n - 1, (n, q)


def test_e8_order() -> None:
    """The order has exactly 2^120 as its 2-part at q = 2."""
    order = e8_order(2)
    assert order % 2**120 == 0
    assert order % 2**121 != 0
    assert order == 2**120 * prod(2**d - 1 for d in E8_DEGREE_DOUBLES)
    with pytest.raises(PreconditionError):
        e8_order(1)


def test_e8_order_prime_divisors_at_two() -> None:
    """The primes of |E8(2)| from trial division of each 2^d - 1."""
    primes = {2}
    for d in E8_DEGREE_DOUBLES:
        primes.update(trial_factor(2**d - 1))
    assert tuple(sorted(primes)) == PI_E8_2
    assert prime_divisors(e8_order(2)) == PI_E8_2


def test_pi_e8_two() -> None:
    """pi(E8(2)) is the 16-prime set."""
    assert pi_e8(2) == PI_E8_2


@pytest.mark.parametrize("q", [4, 8])
def test_pi_e8_matches_trial_division(q: int, shared_cache: FactorCache) -> None:
    """pi(E8(q)) agrees with trial division of every q^d - 1."""
    primes = set(trial_factor(q))
    for d in E8_DEGREE_DOUBLES:
        primes.update(trial_factor(q**d - 1))
    assert pi_e8(q, shared_cache) == tuple(sorted(primes))


def test_pi_e8_rejects_non_prime_power() -> None:
    """q must be a prime power."""
    with pytest.raises(NotPrimePowerError):
        pi_e8(12)


def test_pi_e8_detailed() -> None:
    """Each index contributes its own verified factorization."""
    computation = pi_e8_detailed(4)
    assert computation.q == 4
    assert computation.characteristic == 2
    assert [part.d for part in computation.phi] == list(E8_CYCLOTOMIC_INDICES)
    for part in computation.phi:
        assert part.value == phi_value(part.d, 4)
        assert part.factorization.product() == part.value
        assert part.seconds >= 0
    phi15 = next(part for part in computation.phi if part.d == 15)
    assert phi15.factorization.primes == (151, 331)


def test_holder_values_match_pi_e8(shared_cache: FactorCache) -> None:
    """The 15 holder values cover pi(E8(q)) for every prime power up to 50."""
    for q in range(2, 51):
        if not trial_is_prime_power(q):
            continue
        holders = holder_values(q)
        assert len(holders) == 15
        primes = set()
        for value in holders:
            primes.update(prime_divisors(value, shared_cache))
        assert tuple(sorted(primes)) == pi_e8(q, shared_cache), q


def test_short_list_misses_phi8() -> None:
    """The 13-value list has no factor covering Phi_8, so 17 = Phi_8(2) is absent."""
    values = short_pi_polynomials(2)
    assert len(values) == 13
    primes = set()
    for value in values:
        primes.update(prime_divisors(value))
    assert 17 not in primes
    assert tuple(sorted(primes | {17})) == PI_E8_2


@pytest.mark.parametrize("q", [q for q in range(2, 21) if trial_is_prime_power(q)])
def test_pi_e8_matches_group_order_factorization(q: int, shared_cache: FactorCache) -> None:
    """pi(E8(q)) equals the primes of |E8(q)| factored as a whole."""
    assert pi_e8(q, shared_cache) == prime_divisors(e8_order(q))
