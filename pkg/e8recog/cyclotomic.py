"""Cyclotomic values, the order of E8(q) and its prime-divisor set."""

from __future__ import annotations

import logging
from math import prod
import time

from .arith import divisors, moebius
from .const import (
    E8_CHARACTERISTIC_EXPONENT,
    E8_CYCLOTOMIC_INDICES,
    E8_DEGREE_DOUBLES,
)
from .exceptions import InexactDivisionError, PreconditionError
from .factorizer import FactorCache, as_prime_power, factor
from .types import PhiFactorization, PiComputation, PrimePowerQ

_LOGGER = logging.getLogger(__name__)


def cyclotomic_index_set() -> tuple[int, ...]:
    """Return every divisor of the E8 degree doubles, ascending."""
    return tuple(sorted({d for degree in E8_DEGREE_DOUBLES for d in divisors(degree)}))


def phi_value(d: int, q: int) -> int:
    """Return Phi_d(q) as the Moebius product of the values q^e - 1, e | d."""
    if d < 1 or q < 2:
        raise PreconditionError(f"phi_value needs d >= 1 and q >= 2, got d={d}, q={q}")
    numerator = 1
    denominator = 1
    for e in divisors(d):
        sign = moebius(d // e)
        if sign == 1:
            numerator *= q**e - 1
        elif sign == -1:
            denominator *= q**e - 1
    value, remainder = divmod(numerator, denominator)
    if remainder:
        raise InexactDivisionError(numerator, denominator, f"Phi_{d}({q})")
    return value


def e8_order(q: int) -> int:
    """Return |E8(q)| = q^120 * prod(q^d - 1) over the degree doubles."""
    if q < 2:
        raise PreconditionError(f"e8_order needs q >= 2, got {q}")
    return q**E8_CHARACTERISTIC_EXPONENT * prod(q**d - 1 for d in E8_DEGREE_DOUBLES)


def _as_q(q: PrimePowerQ | int, cache: FactorCache | None) -> PrimePowerQ:
    return q if isinstance(q, PrimePowerQ) else as_prime_power(q, cache)


def pi_e8_detailed(q: PrimePowerQ | int, cache: FactorCache | None = None) -> PiComputation:
    """Compute pi(E8(q)) keeping each Phi_d(q) factorization and its timing."""
    prime_power = _as_q(q, cache)
    started = time.perf_counter()
    primes = {prime_power.s}
    parts = []
    for d in E8_CYCLOTOMIC_INDICES:
        value = phi_value(d, prime_power.q)
        tick = time.perf_counter()
        factorization = factor(value, cache, hint=d)
        parts.append(
            PhiFactorization(
                d=d,
                value=value,
                factorization=factorization,
                seconds=time.perf_counter() - tick,
            )
        )
        primes.update(factorization.primes)

    elapsed = time.perf_counter() - started
    _LOGGER.debug(
        "pi(E8(%d)) has %d primes (%.3fs)", prime_power.q, len(primes), elapsed
    )
    return PiComputation(
        q=prime_power.q,
        characteristic=prime_power.s,
        primes=tuple(sorted(primes)),
        phi=tuple(parts),
        elapsed=elapsed,
    )


def pi_e8(q: PrimePowerQ | int, cache: FactorCache | None = None) -> tuple[int, ...]:
    """Return pi(E8(q)): the characteristic and the primes of every Phi_d(q)."""
    return pi_e8_detailed(q, cache).primes


def holder_values(q: int) -> tuple[int, ...]:
    """Return the 15 composite polynomial values whose primes make up pi(E8(q)).

    Together they split into exactly the Phi_d(q) for the E8 index set.
    """
    return (
        q,
        q - 1,
        q + 1,
        q**4 + 1,
        q**5 - 1,
        q**5 + 1,
        q**6 + 1,
        q**7 - 1,
        q**7 + 1,
        q**8 - q**4 + 1,
        q**9 - 1,
        q**9 + 1,
        q**10 - q**5 + 1,
        q**10 + 1,
        q**10 + q**5 + 1,
    )


def short_pi_polynomials(r: int) -> tuple[int, ...]:
    """Return the 13 values of the short polynomial list for pi(E8(r)).

    This list has no factor covering Phi_8(r) = r^4 + 1, so its prime union
    can fall short of pi(E8(r)); pi_e8 follows the order polynomial instead.
    """
    return (
        r,
        r**2 - 1,
        r**5 + 1,
        r**5 - 1,
        r**6 + 1,
        r**7 + 1,
        r**7 - 1,
        r**8 - r**4 + 1,
        r**9 + 1,
        r**9 - 1,
        r**10 - r**5 + 1,
        r**10 + r**5 + 1,
        r**10 + 1,
    )
