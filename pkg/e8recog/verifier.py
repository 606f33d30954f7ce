"""Recognizability sweep over candidate primes.

For every candidate prime r the sweep checks that neither pi(J4) nor any
pi(E8(theta)) with theta < r is contained in pi(E8(r)). The pi-sets are
computed once per candidate theta on an executor; workers factor in a
private cache seeded from the shared one and hand their new entries back,
so the parent is the only writer of the shared FactorCache.
"""

from __future__ import annotations

import asyncio
from collections.abc import Iterable, Mapping
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
import logging
import time

from tqdm import tqdm

from .arith import sieve
from .const import (
    DEFAULT_CLASSES,
    E8_CYCLOTOMIC_INDICES,
    J4_PRIMES,
    PI_SIZE_FLOOR,
    PI_SIZE_FLOOR_FROM,
    REFERENCE_BOUND,
    REFERENCE_CANDIDATE_COUNT,
    SLOWEST_VALUES_REPORTED,
)
from .cyclotomic import phi_value, pi_e8_detailed
from .exceptions import MissingPiSetError, PreconditionError, VerificationError
from .factorizer import FactorCache
from .types import (
    CandidateSet,
    Factorization,
    PiComputation,
    Report,
    SlowValue,
    VerificationRecord,
    WitnessKind,
)

_LOGGER = logging.getLogger(__name__)


def _check_bound(bound: int) -> None:
    if bound < 2:
        raise PreconditionError(f"bound must be at least 2, got {bound}")


def candidate_primes(bound: int, classes: Iterable[int] = DEFAULT_CLASSES) -> tuple[int, ...]:
    """Return the primes r < bound with r mod 5 in classes."""
    _check_bound(bound)
    allowed = frozenset(classes)
    return tuple(r for r in sieve(bound) if r % 5 in allowed)


def candidate_prime_powers(
    bound: int, classes: Iterable[int] = DEFAULT_CLASSES
) -> tuple[int, ...]:
    """Return the prime powers s^t < bound with s^t mod 5 in classes, ascending."""
    _check_bound(bound)
    allowed = frozenset(classes)
    found = []
    for s in sieve(bound):
        power = s
        while power < bound:
            if power % 5 in allowed:
                found.append(power)
            power *= s
    return tuple(sorted(found))


def candidate_set(bound: int, classes: Iterable[int] = DEFAULT_CLASSES) -> CandidateSet:
    """Collect both candidate lists for a bound."""
    classes = tuple(sorted(set(classes)))
    return CandidateSet(
        bound=bound,
        classes=classes,
        primes_r=candidate_primes(bound, classes),
        prime_powers_theta=candidate_prime_powers(bound, classes),
    )


def check_prime(
    r: int,
    candidates: CandidateSet,
    pi_sets: Mapping[int, Iterable[int]],
    j4: Iterable[int] = J4_PRIMES,
) -> VerificationRecord:
    """Run both subset tests for r; the witness is the smallest failing theta."""
    started = time.perf_counter()
    if r not in pi_sets:
        raise MissingPiSetError(r)
    smaller = [theta for theta in candidates.prime_powers_theta if theta < r]
    for theta in smaller:
        if theta not in pi_sets:
            raise MissingPiSetError(theta)

    pi_r = frozenset(pi_sets[r])
    kind, witness = WitnessKind.NONE, None
    for theta in smaller:
        if pi_r.issuperset(pi_sets[theta]):
            kind, witness = WitnessKind.THETA, theta
            break
    else:
        if pi_r.issuperset(j4):
            kind = WitnessKind.J4

    return VerificationRecord(
        r=r,
        valid=kind is WitnessKind.NONE,
        witness_kind=kind,
        witness_value=witness,
        elapsed=time.perf_counter() - started,
        pi_size=len(pi_r),
    )


def recheck_witness(
    record: VerificationRecord,
    pi_sets: Mapping[int, Iterable[int]],
    j4: Iterable[int] = J4_PRIMES,
) -> bool:
    """Re-verify an invalid record's containment from stored pi-sets."""
    pi_r = frozenset(pi_sets[record.r])
    if record.witness_kind is WitnessKind.THETA:
        return record.witness_value < record.r and pi_r.issuperset(
            pi_sets[record.witness_value]
        )
    if record.witness_kind is WitnessKind.J4:
        return pi_r.issuperset(j4)
    return record.valid


def _phi_values(theta: int) -> list[int]:
    return [phi_value(d, theta) for d in E8_CYCLOTOMIC_INDICES]


def compute_pi_task(
    theta: int, seeds: Mapping[int, Factorization]
) -> tuple[PiComputation, list[Factorization]]:
    """Compute pi(E8(theta)) in a worker and return it with new cache entries."""
    local = FactorCache()
    local.merge(seeds.values())
    computation = pi_e8_detailed(theta, local)
    return computation, [entry for entry in local.entries() if entry.value not in seeds]


def _check_floor(computation: PiComputation) -> None:
    if computation.q >= PI_SIZE_FLOOR_FROM and len(computation.primes) < PI_SIZE_FLOOR:
        _LOGGER.error(
            "pi(E8(%d)) has only %d primes", computation.q, len(computation.primes)
        )
        raise VerificationError(
            f"pi(E8({computation.q})) has {len(computation.primes)} primes,"
            f" expected at least {PI_SIZE_FLOOR}"
        )


def _slowest(computations: Iterable[PiComputation], count: int) -> list[SlowValue]:
    values = [
        SlowValue(theta=computation.q, d=part.d, value=part.value, seconds=part.seconds)
        for computation in computations
        for part in computation.phi
    ]
    values.sort(key=lambda item: (-item.seconds, item.theta, item.d))
    return values[:count]


def _make_executor(jobs: int) -> Executor:
    if jobs > 1:
        return ProcessPoolExecutor(max_workers=jobs)
    return ThreadPoolExecutor(max_workers=1, thread_name_prefix="e8recog")


async def async_compute_pi_sets(
    thetas: Iterable[int],
    cache: FactorCache,
    *,
    jobs: int = 1,
    progress: bool = False,
    flush_interval: float | None = None,
) -> dict[int, PiComputation]:
    """Compute pi(E8(theta)) for every theta, ascending, merging into cache."""
    loop = asyncio.get_running_loop()
    executor = _make_executor(jobs)
    computations: dict[int, PiComputation] = {}
    last_flush = time.monotonic()
    try:
        pending = [
            loop.run_in_executor(
                executor,
                compute_pi_task,
                theta,
                cache.snapshot([theta, *_phi_values(theta)]),
            )
            for theta in sorted(thetas)
        ]
        with tqdm(
            total=len(pending), desc="pi(E8(theta))", unit="theta", disable=not progress
        ) as bar:
            for next_done in asyncio.as_completed(pending):
                computation, new_entries = await next_done
                cache.merge(new_entries)
                _check_floor(computation)
                computations[computation.q] = computation
                bar.update()
                if (
                    flush_interval
                    and cache.path is not None
                    and cache.dirty
                    and time.monotonic() - last_flush >= flush_interval
                ):
                    await loop.run_in_executor(None, cache.save)
                    last_flush = time.monotonic()
    finally:
        executor.shutdown(wait=True, cancel_futures=True)
    return computations


async def async_run(
    bound: int,
    *,
    jobs: int = 1,
    cache: FactorCache | None = None,
    classes: Iterable[int] = DEFAULT_CLASSES,
    progress: bool = False,
    flush_interval: float | None = None,
    j4: Iterable[int] = J4_PRIMES,
) -> Report:
    """Run the sweep for every candidate below bound and return the report."""
    _check_bound(bound)
    if jobs < 1:
        raise PreconditionError(f"jobs must be at least 1, got {jobs}")
    cache = cache if cache is not None else FactorCache()
    started = time.perf_counter()

    candidates = candidate_set(bound, classes)
    expected = None
    if bound == REFERENCE_BOUND and candidates.classes == DEFAULT_CLASSES:
        expected = REFERENCE_CANDIDATE_COUNT
        if len(candidates.primes_r) != expected:
            _LOGGER.warning(
                "Found %d candidate primes below %d, expected %d",
                len(candidates.primes_r),
                bound,
                expected,
            )
    _LOGGER.info(
        "Checking %d candidate primes against %d prime powers below %d (jobs=%d)",
        len(candidates.primes_r),
        len(candidates.prime_powers_theta),
        bound,
        jobs,
    )

    computations = await async_compute_pi_sets(
        candidates.prime_powers_theta,
        cache,
        jobs=jobs,
        progress=progress,
        flush_interval=flush_interval,
    )
    pi_sets = {theta: computation.primes for theta, computation in computations.items()}

    records = []
    for r in candidates.primes_r:
        record = check_prime(r, candidates, pi_sets, j4)
        records.append(
            VerificationRecord(
                r=record.r,
                valid=record.valid,
                witness_kind=record.witness_kind,
                witness_value=record.witness_value,
                elapsed=record.elapsed + computations[r].elapsed,
                pi_size=record.pi_size,
            )
        )

    if cache.path is not None and cache.dirty:
        cache.save()

    report = Report(
        bound=bound,
        classes=candidates.classes,
        candidate_primes=len(candidates.primes_r),
        candidate_prime_powers=len(candidates.prime_powers_theta),
        records=records,
        exceptional=[record.r for record in records if not record.valid],
        runtime=time.perf_counter() - started,
        cache=cache.stats(),
        expected_candidates=expected,
        slowest=_slowest(computations.values(), SLOWEST_VALUES_REPORTED),
        pi_sets=pi_sets,
    )
    _LOGGER.info(
        "Sweep below %d finished in %.1fs: exceptional %s",
        bound,
        report.runtime,
        report.exceptional,
    )
    return report


def run(bound: int, jobs: int = 1, cache: FactorCache | None = None, **kwargs) -> Report:
    """Run the sweep synchronously."""
    return asyncio.run(async_run(bound, jobs=jobs, cache=cache, **kwargs))
