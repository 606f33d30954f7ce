"""Rendering of results as text, JSON and CSV.

JSON payloads encode every unbounded integer (factorization values, primes,
orders) as a decimal string so no consumer loses precision; small counts
and the bounded arguments q, p, r and theta stay plain numbers.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

from jinja2 import DictLoader, Environment, StrictUndefined

from .types import (
    CacheStats,
    Factorization,
    Lemma5Result,
    OrderList,
    PiComputation,
    PrimeGraph,
    Report,
)

CSV_COLUMNS = ("r", "valid", "witness_kind", "witness_value", "elapsed_ms")

TEMPLATES = {
    "factor": "{{ n }} = {{ formatted }}\n",
    "pi": (
        "pi(E8({{ q }})) has {{ count }} primes:\n"
        "{{ primes | join(' ') }}\n"
        "{% for part in phi %}"
        "  Phi_{{ part.d }}({{ q }}) = {{ part.value }} = {{ part.formatted }}"
        " ({{ '%.3f' | format(part.seconds) }}s)\n"
        "{% endfor %}"
        "{% if holders %}holder values:\n"
        "{% for value in holders %}  {{ value }}\n{% endfor %}"
        "{% endif %}"
    ),
    "spectrum": (
        "nu(E8({{ q }})): {{ orders | length }} orders,"
        " family signature {{ signature | join(',') }}\n"
        "{% for entry in orders %}"
        "  ({{ entry.family }}.{{ entry.position }}) {{ entry.expression }}"
        " = {{ entry.value }}\n"
        "{% endfor %}"
        "{% if mu %}mu(E8({{ q }})): {{ mu | length }} maximal orders\n"
        "{% for value in mu %}  {{ value }}\n{% endfor %}"
        "{% endif %}"
    ),
    "member": "{{ m }} {{ 'is' if member else 'is not' }} an element order of E8({{ q }})\n",
    "gk": (
        "GK(E8({{ q }})): {{ vertices | length }} vertices,"
        " {{ edges | length }} edges, {{ component_count }} components\n"
        "{% for component in components %}"
        "  {{ '{' }}{{ component | join(', ') }}{{ '}' }}\n"
        "{% endfor %}"
    ),
    "lemma5": (
        "p = {{ p }}, q = {{ q }}\n"
        "T = (q^2+1)(q^6-1) = {{ witness }}\n"
        "T0 = (q^4-1)(q^2-q+1) = {{ t0 }}\n"
        "max nu(E8({{ p }})) = {{ max_nu }}\n"
        "T {{ 'is excluded from' if excluded else 'LIES IN' }} the spectrum of E8({{ p }})\n"
    ),
    "report": (
        "Checked {{ candidate_primes }} candidate primes below {{ bound }}"
        " (classes {{ classes | join(',') }} mod 5) against"
        " {{ candidate_prime_powers }} prime powers in"
        " {{ '%.1f' | format(runtime) }}s\n"
        "{% if not candidate_count_matches %}"
        "WARNING: expected {{ expected_candidates }} candidate primes,"
        " found {{ candidate_primes }}\n"
        "{% endif %}"
        "Exceptional primes: {{ exceptional | join(', ') if exceptional else 'none' }}\n"
        "{% for record in records if not record.valid %}"
        "  r = {{ record.r }}: pi({{ 'J4' if record.witness_kind == 'J4'"
        " else 'E8(' ~ record.witness_value ~ ')' }}) is contained in pi(E8({{ record.r }}))\n"
        "{% endfor %}"
        "{% if cache %}Factor cache: {{ cache.entries }} entries,"
        " {{ cache.hits }} hits, {{ cache.misses }} misses\n{% endif %}"
        "{% if slowest %}Slowest factorizations:\n"
        "{% for item in slowest %}"
        "  Phi_{{ item.d }}({{ item.theta }}) = {{ item.value }}:"
        " {{ '%.3f' | format(item.seconds) }}s\n"
        "{% endfor %}{% endif %}"
    ),
    "cache_stats": (
        "Factor cache {{ path or '(memory)' }}: {{ entries }} entries"
        "{% if dropped_on_load %}, {{ dropped_on_load }} dropped on load{% endif %}\n"
    ),
    "cache_verify": (
        "Checked {{ checked }} entries, {{ problems | length }} corrupt"
        "{% if pruned %}, {{ pruned }} pruned{% endif %}\n"
        "{% for item in problems %}  {{ item.value }}: {{ item.problem }}\n{% endfor %}"
    ),
}

_ENV = Environment(
    loader=DictLoader(TEMPLATES),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    autoescape=False,
)


def render_text(kind: str, payload: dict[str, Any]) -> str:
    """Render a payload with the text template of the same kind."""
    return _ENV.get_template(kind).render(**payload)


def render_json(payload: dict[str, Any]) -> str:
    """Serialize a payload as indented JSON."""
    return json.dumps(payload, indent=2) + "\n"


def render_csv(report: Report) -> str:
    """Return the per-candidate records as CSV."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in report.records:
        writer.writerow(
            (
                record.r,
                "true" if record.valid else "false",
                record.witness_kind.value,
                "" if record.witness_value is None else record.witness_value,
                f"{record.elapsed * 1000:.3f}",
            )
        )
    return buffer.getvalue()


def factors_payload(factorization: Factorization) -> list[list[str | int]]:
    """Return (prime, exponent) pairs with the prime as a string."""
    return factorization.to_json()


def factor_payload(factorization: Factorization) -> dict[str, Any]:
    """Return the payload for factor."""
    return {
        "n": str(factorization.value),
        "factors": factors_payload(factorization),
        "formatted": factorization.format(),
    }


def pi_payload(
    computation: PiComputation, holders: tuple[int, ...] | None = None
) -> dict[str, Any]:
    """Return the payload for pi, with holder values when requested."""
    return {
        "q": computation.q,
        "characteristic": computation.characteristic,
        "count": len(computation.primes),
        "primes": [str(prime) for prime in computation.primes],
        "phi": [
            {
                "d": part.d,
                "value": str(part.value),
                "factors": factors_payload(part.factorization),
                "formatted": part.factorization.format(),
                "seconds": part.seconds,
            }
            for part in computation.phi
        ],
        "holders": [str(value) for value in holders] if holders else None,
    }


def spectrum_payload(orders: OrderList, mu: tuple[int, ...] | None = None) -> dict[str, Any]:
    """Return the payload for spectrum, with mu when requested."""
    return {
        "q": orders.q.q,
        "signature": list(orders.family_signature()),
        "orders": [
            {
                "family": entry.family,
                "position": entry.position,
                "expression": entry.expression,
                "value": str(entry.value),
            }
            for entry in orders.entries
        ],
        "mu": [str(value) for value in mu] if mu is not None else None,
    }


def member_payload(q: int, m: int, member: bool) -> dict[str, Any]:
    """Return the payload for member."""
    return {"q": q, "m": str(m), "member": member}


def gk_payload(q: int, graph: PrimeGraph) -> dict[str, Any]:
    """Return the payload for gk."""
    return {
        "q": q,
        "vertices": [str(vertex) for vertex in graph.vertices],
        "edges": [[str(a), str(b)] for a, b in sorted(graph.edges)],
        "components": [[str(vertex) for vertex in part] for part in graph.components],
        "component_count": len(graph.components),
    }


def lemma5_payload(result: Lemma5Result) -> dict[str, Any]:
    """Return the payload for lemma5."""
    return {
        "p": result.p,
        "q": result.q,
        "witness": str(result.witness),
        "excluded": result.excluded,
        "t0": str(result.t0),
        "max_nu": str(result.max_nu),
    }


def cache_stats_payload(stats: CacheStats) -> dict[str, Any]:
    """Return the payload for cache stats."""
    return {
        "path": stats.path,
        "entries": stats.entries,
        "hits": stats.hits,
        "misses": stats.misses,
        "stores": stats.stores,
        "dropped_on_load": stats.dropped_on_load,
        "dirty": stats.dirty,
    }


def cache_verify_payload(
    checked: int, problems: list[tuple[int | str, str]], pruned: int
) -> dict[str, Any]:
    """Return the payload for cache verify."""
    return {
        "checked": checked,
        "problems": [{"value": str(value), "problem": problem} for value, problem in problems],
        "pruned": pruned,
    }


def report_payload(report: Report) -> dict[str, Any]:
    """Return the full sweep report, records included."""
    return {
        "bound": report.bound,
        "classes": list(report.classes),
        "candidate_primes": report.candidate_primes,
        "candidate_prime_powers": report.candidate_prime_powers,
        "expected_candidates": report.expected_candidates,
        "candidate_count_matches": report.candidate_count_matches,
        "exceptional": list(report.exceptional),
        "runtime": report.runtime,
        "records": [
            {
                "r": record.r,
                "valid": record.valid,
                "witness_kind": record.witness_kind.value,
                "witness_value": record.witness_value,
                "elapsed_ms": record.elapsed * 1000,
                "pi_size": record.pi_size,
            }
            for record in report.records
        ],
        "cache": cache_stats_payload(report.cache) if report.cache else None,
        "slowest": [
            {
                "theta": item.theta,
                "d": item.d,
                "value": str(item.value),
                "seconds": item.seconds,
            }
            for item in report.slowest
        ],
        "pi_sets": {
            str(theta): [str(prime) for prime in primes]
            for theta, primes in sorted(report.pi_sets.items())
        },
    }
