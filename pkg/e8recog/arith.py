"""Exact natural-number arithmetic and primality primitives.

Everything here is a pure function of its arguments. Python integers are
exact, gmpy2 supplies the probable-prime tests and integer roots, and numpy
backs the sieve.
"""

from __future__ import annotations

from functools import cache
from math import gcd as _gcd, isqrt

import gmpy2
import numpy as np

from .const import MILLER_RABIN_BASES, MILLER_RABIN_DETERMINISTIC_BOUND

__all__ = ["divisors", "gcd", "int_pow", "is_prime", "kth_root_floor", "moebius", "sieve"]


def int_pow(base: int, exponent: int) -> int:
    """Return base**exponent exactly, with 0**0 == 1."""
    if exponent < 0:
        raise ValueError(f"negative exponent {exponent}")
    return int(base) ** int(exponent)


@cache
def _sieve_table(limit: int) -> tuple[int, ...]:
    flags = np.ones(limit, dtype=bool)
    flags[:2] = False
    for candidate in range(2, isqrt(limit - 1) + 1):
        if flags[candidate]:
            flags[candidate * candidate :: candidate] = False
    return tuple(int(prime) for prime in np.flatnonzero(flags))


def sieve(limit: int) -> tuple[int, ...]:
    """Return the primes p with 2 <= p < limit in ascending order.

    The table is memoized per limit and shared, hence the immutable tuple.
    """
    if limit <= 2:
        return ()
    return _sieve_table(int(limit))


def is_prime(n: int) -> bool:
    """Return True iff n is prime.

    Below 3.3e24 the strong-pseudoprime test to the bases 2..41 is a proof.
    Above it the strong Baillie-PSW test is used: it has no known
    counterexample but is not a proof, and every value this package handles
    stays well below 1e40.
    """
    if n < 2:
        return False
    for base in MILLER_RABIN_BASES:
        if n == base:
            return True
        if n % base == 0:
            return False
    if n < MILLER_RABIN_BASES[-1] ** 2:
        return True
    if n < MILLER_RABIN_DETERMINISTIC_BOUND:
        return all(gmpy2.is_strong_prp(n, base) for base in MILLER_RABIN_BASES)
    return bool(gmpy2.is_strong_bpsw_prp(n))


def gcd(a: int, b: int) -> int:
    """Greatest common divisor, with gcd(0, 0) == 0."""
    return _gcd(a, b)


def moebius(n: int) -> int:
    """Return the Moebius function mu(n) for n >= 1."""
    if n < 1:
        raise ValueError(f"moebius is undefined for {n}")
    result = 1
    remaining = n
    divisor = 2
    while divisor * divisor <= remaining:
        if remaining % divisor == 0:
            remaining //= divisor
            if remaining % divisor == 0:
                return 0
            result = -result
        divisor += 1
    if remaining > 1:
        result = -result
    return result


def kth_root_floor(n: int, k: int) -> int:
    """Return the largest x with x**k <= n."""
    if k < 1:
        raise ValueError(f"root index must be positive, got {k}")
    if n < 0:
        raise ValueError(f"root of negative value {n}")
    root, _exact = gmpy2.iroot(n, k)
    return int(root)


def divisors(n: int) -> tuple[int, ...]:
    """Return the positive divisors of a small n in ascending order."""
    if n < 1:
        raise ValueError(f"divisors are undefined for {n}")
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    large = [n // d for d in reversed(small) if d * d != n]
    return tuple(small + large)
