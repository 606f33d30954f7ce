"""Prime sets, spectra and prime graphs of E8(q), and the recognizability sweep."""

from .cyclotomic import (
    cyclotomic_index_set,
    e8_order,
    holder_values,
    phi_value,
    pi_e8,
    pi_e8_detailed,
    short_pi_polynomials,
)
from .factorizer import FactorCache, as_prime_power, factor, prime_divisors
from .primegraph import build_graph, component_count, gk_e8
from .spectrum import PPhiTable, in_spectrum, lemma5_check, mu_e8, nu_e8, p_phi
from .verifier import (
    async_run,
    candidate_prime_powers,
    candidate_primes,
    check_prime,
    run,
)

__all__ = [
    "FactorCache",
    "PPhiTable",
    "as_prime_power",
    "async_run",
    "build_graph",
    "candidate_prime_powers",
    "candidate_primes",
    "check_prime",
    "component_count",
    "cyclotomic_index_set",
    "e8_order",
    "factor",
    "gk_e8",
    "holder_values",
    "in_spectrum",
    "lemma5_check",
    "mu_e8",
    "nu_e8",
    "p_phi",
    "phi_value",
    "pi_e8",
    "pi_e8_detailed",
    "prime_divisors",
    "run",
    "short_pi_polynomials",
]
