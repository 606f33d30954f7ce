"""Typed definitions for the E8 recognition toolkit.

Keep plain dataclasses and enums here so every module can import them
without causing circular package imports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class OutputFormat(Enum):
    """Rendering formats supported by the command-line front end."""

    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class WitnessKind(Enum):
    """Why a candidate prime failed the recognizability hypothesis.

    Values:
        NONE: the candidate passed both subset tests
        THETA: pi(E8(theta)) is contained in pi(E8(r)) for some theta < r
        J4: pi(J4) is contained in pi(E8(r))
    """

    NONE = "none"
    THETA = "theta"
    J4 = "J4"


@dataclass(frozen=True)
class Factorization:
    """Exact prime factorization of a natural number.

    factors holds (prime, exponent) pairs with primes strictly ascending;
    the empty tuple is the factorization of 1.
    """

    value: int
    factors: tuple[tuple[int, int], ...] = ()

    @property
    def primes(self) -> tuple[int, ...]:
        """Return the distinct primes in ascending order."""
        return tuple(prime for prime, _ in self.factors)

    def product(self) -> int:
        """Multiply the factors back together."""
        result = 1
        for prime, exponent in self.factors:
            result *= prime**exponent
        return result

    def format(self) -> str:
        """Return a human readable product such as ``2^3 * 151``."""
        if not self.factors:
            return "1"
        return " * ".join(
            str(prime) if exponent == 1 else f"{prime}^{exponent}"
            for prime, exponent in self.factors
        )

    def to_json(self) -> list[list[str | int]]:
        """Encode as ``[[decimal prime, exponent], ...]`` for the cache file."""
        return [[str(prime), exponent] for prime, exponent in self.factors]


@dataclass(frozen=True)
class PrimePowerQ:
    """A field size q = s^t with s prime and t >= 1."""

    s: int
    t: int
    q: int

    @property
    def is_prime(self) -> bool:
        """Return True when q itself is prime."""
        return self.t == 1


@dataclass(frozen=True)
class CacheStats:
    """Counters describing a factor cache."""

    entries: int
    hits: int
    misses: int
    stores: int
    dropped_on_load: int
    dirty: bool
    path: str | None


@dataclass(frozen=True)
class PhiFactorization:
    """Factorization of a single cyclotomic value Phi_d(q) with its cost."""

    d: int
    value: int
    factorization: Factorization
    seconds: float


@dataclass(frozen=True)
class PiComputation:
    """pi(E8(q)) together with the per-index factorizations behind it."""

    q: int
    characteristic: int
    primes: tuple[int, ...]
    phi: tuple[PhiFactorization, ...]
    elapsed: float


@dataclass(frozen=True)
class OrderEntry:
    """One of the 67 element orders listed for E8(q)."""

    family: int
    position: int
    expression: str
    value: int


@dataclass(frozen=True)
class OrderList:
    """The nu(E8(q)) order list grouped by family index 1-11."""

    q: PrimePowerQ
    entries: tuple[OrderEntry, ...]

    def values(self) -> tuple[int, ...]:
        """Return the 67 values in family order."""
        return tuple(entry.value for entry in self.entries)

    def family(self, index: int) -> tuple[OrderEntry, ...]:
        """Return the entries of one family."""
        return tuple(entry for entry in self.entries if entry.family == index)

    def family_signature(self) -> tuple[int, ...]:
        """Return the number of entries per family, families 1..11."""
        return tuple(len(self.family(index)) for index in range(1, 12))


@dataclass(frozen=True)
class Lemma5Result:
    """Outcome of the (q^2+1)(q^6-1) witness check for a pair p < q."""

    p: int
    q: int
    witness: int
    excluded: bool
    t0: int
    max_nu: int


@dataclass(frozen=True)
class PrimeGraph:
    """Prime graph of a set of integers.

    edges holds ordered pairs (a, b) with a < b; components are sorted
    tuples ordered by their smallest member.
    """

    vertices: tuple[int, ...] = ()
    edges: frozenset[tuple[int, int]] = frozenset()
    components: tuple[tuple[int, ...], ...] = ()

    def component_of(self, vertex: int) -> tuple[int, ...]:
        """Return the component containing vertex."""
        for component in self.components:
            if vertex in component:
                return component
        raise KeyError(vertex)

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Return the sorted neighbour list of every vertex."""
        neighbours: dict[int, set[int]] = {vertex: set() for vertex in self.vertices}
        for a, b in self.edges:
            neighbours[a].add(b)
            neighbours[b].add(a)
        return {vertex: tuple(sorted(adj)) for vertex, adj in neighbours.items()}


@dataclass(frozen=True)
class CandidateSet:
    """Candidate primes r and prime powers theta below a bound."""

    bound: int
    classes: tuple[int, ...]
    primes_r: tuple[int, ...]
    prime_powers_theta: tuple[int, ...]


@dataclass(frozen=True)
class VerificationRecord:
    """Per-candidate outcome of the recognizability check."""

    r: int
    valid: bool
    witness_kind: WitnessKind
    witness_value: int | None
    elapsed: float
    pi_size: int

    def mathematical_fields(self) -> tuple:
        """Return the fields that must not depend on scheduling."""
        return (self.r, self.valid, self.witness_kind, self.witness_value, self.pi_size)


@dataclass(frozen=True)
class SlowValue:
    """A factorization that dominated the sweep's runtime."""

    theta: int
    d: int
    value: int
    seconds: float


@dataclass
class Report:
    """Result of a verification sweep."""

    bound: int
    classes: tuple[int, ...]
    candidate_primes: int
    candidate_prime_powers: int
    records: list[VerificationRecord] = field(default_factory=list)
    exceptional: list[int] = field(default_factory=list)
    runtime: float = 0.0
    cache: CacheStats | None = None
    expected_candidates: int | None = None
    slowest: list[SlowValue] = field(default_factory=list)
    pi_sets: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def candidate_count_matches(self) -> bool:
        """Return False when the candidate count disagrees with the expected one."""
        return (
            self.expected_candidates is None
            or self.expected_candidates == self.candidate_primes
        )
