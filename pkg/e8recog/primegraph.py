"""Prime graphs of integer sets and the Gruenberg-Kegel graph of E8(q)."""

from __future__ import annotations

from collections.abc import Iterable
from itertools import combinations
import logging

from .cyclotomic import pi_e8
from .exceptions import FactorizationError, PreconditionError
from .factorizer import FactorCache, as_prime_power, prime_divisors
from .spectrum import PPhiTable, nu_e8
from .types import PrimeGraph, PrimePowerQ

_LOGGER = logging.getLogger(__name__)


class UnionFind:
    """Disjoint sets keyed by arbitrary vertices, with path compression."""

    def __init__(self, vertices: Iterable[int] = ()) -> None:
        """Start with every vertex in its own set."""
        self._parent: dict[int, int] = {vertex: vertex for vertex in vertices}

    def add(self, vertex: int) -> None:
        """Add vertex as a singleton if it is new."""
        self._parent.setdefault(vertex, vertex)

    def find(self, vertex: int) -> int:
        """Return the representative of vertex's set."""
        root = vertex
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[vertex] != root:
            self._parent[vertex], vertex = root, self._parent[vertex]
        return root

    def union(self, a: int, b: int) -> None:
        """Merge the sets containing a and b, keeping the smaller root."""
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return
        if root_b < root_a:
            root_a, root_b = root_b, root_a
        self._parent[root_b] = root_a

    def components(self) -> tuple[tuple[int, ...], ...]:
        """Return the sets as sorted tuples ordered by smallest member."""
        groups: dict[int, list[int]] = {}
        for vertex in sorted(self._parent):
            groups.setdefault(self.find(vertex), []).append(vertex)
        return tuple(sorted(tuple(group) for group in groups.values()))


def graph_from_prime_sets(prime_sets: Iterable[Iterable[int]]) -> PrimeGraph:
    """Build the prime graph whose edges join primes sharing a set."""
    vertices: set[int] = set()
    edges: set[tuple[int, int]] = set()
    forest = UnionFind()
    for primes in prime_sets:
        members = sorted(set(primes))
        for prime in members:
            vertices.add(prime)
            forest.add(prime)
        for a, b in combinations(members, 2):
            edges.add((a, b))
            forest.union(a, b)
    return PrimeGraph(
        vertices=tuple(sorted(vertices)),
        edges=frozenset(edges),
        components=forest.components(),
    )


def build_graph(orders: Iterable[int], cache: FactorCache | None = None) -> PrimeGraph:
    """Return the prime graph of a set of positive integers."""
    values = sorted(set(orders))
    if values and values[0] < 1:
        raise PreconditionError(f"orders must be positive, got {values[0]}")
    return graph_from_prime_sets(prime_divisors(value, cache) for value in values)


def _split_over(value: int, primes: tuple[int, ...]) -> tuple[int, ...]:
    """Return the primes dividing value, all of which must come from primes."""
    found = []
    remaining = value
    for prime in primes:
        if remaining % prime == 0:
            found.append(prime)
            while remaining % prime == 0:
                remaining //= prime
    if remaining != 1:
        raise FactorizationError(value, f"cofactor {remaining} has primes outside pi(E8)")
    return tuple(found)


def gk_e8(
    q: PrimePowerQ | int,
    table: PPhiTable | None = None,
    cache: FactorCache | None = None,
) -> PrimeGraph:
    """Return GK(E8(q)), which coincides with the vanishing prime graph.

    Every order divides |E8(q)|, so its primes are read off by trial
    division with pi(E8(q)) instead of factoring each order afresh.
    """
    prime_power = q if isinstance(q, PrimePowerQ) else as_prime_power(q, cache)
    primes = pi_e8(prime_power, cache)
    orders = nu_e8(prime_power, table)
    graph = graph_from_prime_sets(
        _split_over(value, primes) for value in set(orders.values())
    )
    _LOGGER.debug(
        "GK(E8(%d)): %d vertices, %d edges, %d components",
        prime_power.q,
        len(graph.vertices),
        len(graph.edges),
        len(graph.components),
    )
    return graph


def component_count(graph: PrimeGraph) -> int:
    """Return the number of connected components."""
    return len(graph.components)


def adjacency_lines(graph: PrimeGraph) -> list[str]:
    """Return one whitespace-separated line per vertex: vertex, then neighbours."""
    return [
        " ".join(str(item) for item in (vertex, *neighbours))
        for vertex, neighbours in graph.adjacency().items()
    ]
