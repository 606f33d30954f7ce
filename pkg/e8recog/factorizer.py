"""Complete factorization of natural numbers with a persistent cache.

factor() works through a fixed pipeline: cache lookup, trial division by
the primes below 1e5, perfect-power detection and finally Pollard rho with
Brent's cycle detection on whatever composite cofactors remain. The rho
parameter schedule is deterministic so cached results are reproducible.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from functools import cache
import json
import logging
from math import prod
import os
from pathlib import Path
import tempfile
import threading
from typing import Any

import gmpy2

from .arith import gcd, is_prime, kth_root_floor, sieve
from .const import PERFECT_POWER_MAX_EXPONENT, RHO_BATCH, TRIAL_DIVISION_BOUND
from .exceptions import (
    CacheError,
    FactorizationError,
    NotPrimePowerError,
    PreconditionError,
)
from .types import CacheStats, Factorization, PrimePowerQ

_LOGGER = logging.getLogger(__name__)

# Polynomials x^2 + c tried before giving up on a cofactor.
MAX_RHO_ATTEMPTS = 64


class FactorCache:
    """Thread-safe map from composite values to verified factorizations.

    Any number of threads may read; writers are serialized by a lock.
    Entries are deterministic, so two workers storing the same value is
    harmless. Persistence is explicit through save().
    """

    def __init__(self, path: str | Path | None = None, *, lookups: bool = True) -> None:
        """Initialize an empty cache bound to an optional storage path."""
        self.path = Path(path) if path is not None else None
        self.lookups = lookups
        self.dirty = False
        self._entries: dict[int, Factorization] = {}
        self._lock = threading.RLock()
        self._hits = 0
        self._misses = 0
        self._stores = 0
        self._dropped_on_load = 0
        self.rejected: list[tuple[str, str]] = []

    def __len__(self) -> int:
        """Return the number of stored entries."""
        return len(self._entries)

    def __contains__(self, value: object) -> bool:
        """Return True if value has a stored factorization."""
        return value in self._entries

    @classmethod
    def load(cls, path: str | Path, *, lookups: bool = True) -> FactorCache:
        """Load a cache file, re-verifying every entry.

        A missing file yields an empty cache. Entries failing the product or
        primality check are dropped with a warning; an unreadable or
        malformed file raises CacheError.
        """
        factor_cache = cls(path, lookups=lookups)
        target = Path(path)
        if not target.exists():
            _LOGGER.debug("Factor cache %s not found, starting empty", target)
            return factor_cache

        try:
            raw = json.loads(target.read_text(encoding="utf-8"))
        except OSError as err:
            raise CacheError(f"cannot read factor cache {target}: {err}") from err
        except json.JSONDecodeError as err:
            raise CacheError(f"factor cache {target} is not valid JSON: {err}") from err
        if not isinstance(raw, dict):
            raise CacheError(f"factor cache {target} must hold a JSON object")

        for key, pairs in raw.items():
            entry, problem = decode_entry(key, pairs)
            if entry is None:
                factor_cache._dropped_on_load += 1
                factor_cache.rejected.append((key, str(problem)))
                _LOGGER.warning("Dropping corrupt factor cache entry %s: %s", key, problem)
                continue
            factor_cache._entries[entry.value] = entry

        _LOGGER.info(
            "Loaded %d factorizations from %s (%d dropped)",
            len(factor_cache._entries),
            target,
            factor_cache._dropped_on_load,
        )
        return factor_cache

    def save(self, path: str | Path | None = None) -> Path:
        """Write the cache atomically (temporary file, then rename)."""
        target = Path(path) if path is not None else self.path
        if target is None:
            raise CacheError("factor cache has no storage path")

        with self._lock:
            payload = {
                str(value): self._entries[value].to_json()
                for value in sorted(self._entries)
            }
            try:
                target.parent.mkdir(parents=True, exist_ok=True)
                with tempfile.NamedTemporaryFile(
                    "w",
                    encoding="utf-8",
                    dir=target.parent,
                    prefix=f".{target.name}.",
                    suffix=".tmp",
                    delete=False,
                ) as handle:
                    json.dump(payload, handle)
                    temp_name = handle.name
                os.replace(temp_name, target)
            except OSError as err:
                raise CacheError(f"cannot write factor cache {target}: {err}") from err
            self.dirty = False

        _LOGGER.info("Saved %d factorizations to %s", len(payload), target)
        return target

    def get(self, value: int) -> Factorization | None:
        """Return the stored factorization of value, counting hits and misses."""
        if not self.lookups:
            return None
        with self._lock:
            entry = self._entries.get(value)
            if entry is None:
                self._misses += 1
            else:
                self._hits += 1
            return entry

    def put(self, entry: Factorization) -> None:
        """Store a factorization."""
        with self._lock:
            self._entries[entry.value] = entry
            self._stores += 1
            self.dirty = True

    def merge(self, entries: Iterable[Factorization]) -> None:
        """Store several factorizations computed elsewhere."""
        with self._lock:
            for entry in entries:
                if entry.value not in self._entries:
                    self.put(entry)

    def snapshot(self, values: Iterable[int]) -> dict[int, Factorization]:
        """Return the stored entries for values, for seeding a worker."""
        if not self.lookups:
            return {}
        found = {}
        for value in values:
            entry = self.get(value)
            if entry is not None:
                found[value] = entry
        return found

    def entries(self) -> list[Factorization]:
        """Return all stored entries in ascending value order."""
        with self._lock:
            return [self._entries[value] for value in sorted(self._entries)]

    def discard(self, values: Iterable[int]) -> int:
        """Remove values from the cache and return how many were present."""
        removed = 0
        with self._lock:
            for value in values:
                if self._entries.pop(value, None) is not None:
                    removed += 1
            if removed:
                self.dirty = True
        return removed

    def verify(self) -> list[tuple[int, str]]:
        """Re-check every entry and return (value, problem) for failures."""
        problems = []
        for entry in self.entries():
            problem = check_factorization(entry)
            if problem is not None:
                problems.append((entry.value, problem))
        return problems

    def stats(self) -> CacheStats:
        """Return the current counters."""
        with self._lock:
            return CacheStats(
                entries=len(self._entries),
                hits=self._hits,
                misses=self._misses,
                stores=self._stores,
                dropped_on_load=self._dropped_on_load,
                dirty=self.dirty,
                path=str(self.path) if self.path is not None else None,
            )


def check_factorization(entry: Factorization) -> str | None:
    """Return why entry violates the Factorization invariants, or None."""
    if entry.value < 1:
        return f"value {entry.value} is not positive"
    previous = 1
    for prime, exponent in entry.factors:
        if prime <= previous:
            return "primes are not strictly ascending"
        if exponent < 1:
            return f"exponent {exponent} of {prime} is not positive"
        if not is_prime(prime):
            return f"{prime} is not prime"
        previous = prime
    product = entry.product()
    if product != entry.value:
        return f"product {product} differs from {entry.value}"
    return None


def decode_entry(key: str, pairs: Any) -> tuple[Factorization | None, str | None]:
    """Decode and verify one cache file entry."""
    try:
        value = int(key, 10)
        factors = tuple((int(prime, 10), int(exponent)) for prime, exponent in pairs)
    except (TypeError, ValueError) as err:
        return None, f"malformed entry ({err})"
    entry = Factorization(value, factors)
    problem = check_factorization(entry)
    if problem is not None:
        return None, problem
    return entry, None


@cache
def _small_primes() -> tuple[int, ...]:
    return sieve(TRIAL_DIVISION_BOUND)


@cache
def _small_primorial() -> int:
    return prod(_small_primes())


@cache
def _hinted_primes(d: int) -> tuple[int, ...]:
    """Small primes that can divide Phi_d(q): p = 1 (mod d) or p | d."""
    if d <= 2:
        return _small_primes()
    return tuple(p for p in _small_primes() if p % d == 1 or d % p == 0)


def _trial_divide(n: int, hint: int | None) -> tuple[Counter[int], int]:
    """Strip every prime factor below the trial-division bound.

    A gcd against the primorial tells up front whether any small prime
    divides n at all, and which ones remain to be found.
    """
    found: Counter[int] = Counter()
    pending = gcd(n, _small_primorial())
    if pending == 1:
        return found, n
    for prime in _hinted_primes(hint) if hint else _small_primes():
        if prime > pending:
            break
        if pending % prime:
            continue
        pending //= prime
        while n % prime == 0:
            n //= prime
            found[prime] += 1
        if pending == 1:
            break
    return found, n


def _perfect_power(n: int) -> tuple[int, int]:
    """Return (root, k) with root**k == n for the smallest k <= 6, else (n, 1)."""
    for k in range(2, PERFECT_POWER_MAX_EXPONENT + 1):
        root = kth_root_floor(n, k)
        if root > 1 and root**k == n:
            return root, k
    return n, 1


def _brent(n: int, c: int) -> int | None:
    """Run one Pollard-Brent rho pass with f(x) = x^2 + c from x0 = 2.

    Differences are multiplied together and checked with a single gcd every
    RHO_BATCH steps. Returns a proper divisor, or None when the cycle closes
    without one.
    """
    modulus = gmpy2.mpz(n)
    y = gmpy2.mpz(2)
    x = y
    saved = y
    product = gmpy2.mpz(1)
    divisor = gmpy2.mpz(1)
    span = 1
    while divisor == 1:
        x = y
        for _ in range(span):
            y = (y * y + c) % modulus
        done = 0
        while done < span and divisor == 1:
            saved = y
            for _ in range(min(RHO_BATCH, span - done)):
                y = (y * y + c) % modulus
                product = product * abs(x - y) % modulus
            divisor = gmpy2.gcd(product, modulus)
            done += RHO_BATCH
        span *= 2

    if divisor == modulus:
        # The batch overshot; replay it one step at a time.
        divisor = gmpy2.mpz(1)
        while divisor == 1:
            saved = (saved * saved + c) % modulus
            divisor = gmpy2.gcd(abs(x - saved), modulus)

    if divisor == modulus:
        return None
    return int(divisor)


def _find_divisor(n: int) -> int:
    for c in range(1, MAX_RHO_ATTEMPTS + 1):
        divisor = _brent(n, c)
        if divisor is not None:
            return divisor
        _LOGGER.debug("rho with c=%d found no divisor of %d, retrying", c, n)
    raise FactorizationError(n, f"rho failed for c = 1..{MAX_RHO_ATTEMPTS}")


def _split_cofactor(n: int, counts: Counter[int]) -> None:
    stack = [(n, 1)]
    while stack:
        value, multiplicity = stack.pop()
        if value == 1:
            continue
        if is_prime(value):
            counts[value] += multiplicity
            continue
        root, k = _perfect_power(value)
        if k > 1:
            stack.append((root, multiplicity * k))
            continue
        divisor = 2 if value % 2 == 0 else _find_divisor(value)
        stack.append((divisor, multiplicity))
        stack.append((value // divisor, multiplicity))


def factor(
    n: int, cache: FactorCache | None = None, *, hint: int | None = None
) -> Factorization:
    """Return the complete factorization of n >= 1.

    hint: when the caller knows n == Phi_hint(q), trial division only tries
    primes that can divide such a value. Correctness does not depend on it;
    any prime it skips is still found by rho.
    """
    if n < 1:
        raise PreconditionError(f"factor requires n >= 1, got {n}")
    if n == 1:
        return Factorization(1)
    if cache is not None:
        cached = cache.get(n)
        if cached is not None:
            return cached

    counts, cofactor = _trial_divide(n, hint)
    _split_cofactor(cofactor, counts)
    result = Factorization(n, tuple(sorted(counts.items())))
    if result.product() != n:
        raise FactorizationError(n, f"factors multiply to {result.product()}")

    if cache is not None and (len(result.factors) > 1 or result.factors[0][1] > 1):
        cache.put(result)
    _LOGGER.debug("Factored %d = %s", n, result.format())
    return result


def prime_divisors(
    n: int, cache: FactorCache | None = None, *, hint: int | None = None
) -> tuple[int, ...]:
    """Return the distinct primes dividing n in ascending order."""
    return factor(n, cache, hint=hint).primes


def factor_many(
    values: Mapping[int, int], seeds: Mapping[int, Factorization] | None = None
) -> dict[int, Factorization]:
    """Factor hinted values {value: hint} with a private cache seeded by seeds."""
    local = FactorCache()
    local.merge((seeds or {}).values())
    return {value: factor(value, local, hint=hint) for value, hint in values.items()}


def as_prime_power(q: int, cache: FactorCache | None = None) -> PrimePowerQ:
    """Validate q as a prime power s^t, raising NotPrimePowerError otherwise."""
    if q < 2:
        raise NotPrimePowerError(q, None)
    factorization = factor(q, cache)
    if len(factorization.factors) != 1:
        raise NotPrimePowerError(q, factorization)
    (s, t), = factorization.factors
    return PrimePowerQ(s=s, t=t, q=q)
