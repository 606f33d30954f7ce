"""Independent oracles shared by the e8recog tests."""

from __future__ import annotations

PI_E8_2 = (2, 3, 5, 7, 11, 13, 17, 19, 31, 41, 43, 73, 127, 151, 241, 331)

FAMILY_SIGNATURE = (21, 11, 10, 6, 3, 5, 4, 1, 3, 2, 1)


def trial_factor(n: int) -> dict[int, int]:
    """Factor n by plain trial division."""
    found: dict[int, int] = {}
    divisor = 2
    while divisor * divisor <= n:
        while n % divisor == 0:
            found[divisor] = found.get(divisor, 0) + 1
            n //= divisor
        divisor += 1 if divisor == 2 else 2
    if n > 1:
        found[n] = found.get(n, 0) + 1
    return found


def trial_is_prime(n: int) -> bool:
    """Primality by trial division."""
    return n >= 2 and trial_factor(n) == {n: 1}


def trial_is_prime_power(n: int) -> bool:
    """Return True when n = s^t for a prime s."""
    return n >= 2 and len(trial_factor(n)) == 1
