"""Tests for the element orders of E8(q), p(Phi) and the (q^2+1)(q^6-1) witness."""

from __future__ import annotations

from pathlib import Path

import pytest

from e8recog.arith import divisors, is_prime
from e8recog.const import DEFAULT_CLASSES, PPHI_LABELS
from e8recog.cyclotomic import e8_order
from e8recog.exceptions import ConfigError, PreconditionError, UnknownLabelError
from e8recog.spectrum import (
    ORDER_TABLE,
    PPhiTable,
    default_table,
    in_spectrum,
    lemma5_check,
    mu_e8,
    nu_e8,
    p_phi,
)

from .common import FAMILY_SIGNATURE, trial_is_prime_power

SAMPLE_Q = (2, 3, 4, 5, 7, 8, 9, 11, 16, 19, 25, 29, 31, 49)

CANDIDATE_Q = tuple(
    q for q in range(2, 101) if trial_is_prime_power(q) and q % 5 in DEFAULT_CLASSES
)


def test_default_pphi_table() -> None:
    """Defaults follow the smallest-power rule."""
    assert p_phi("E8", 31) == 31
    assert p_phi("A4", 5) == 5
    assert p_phi("A2", 2) == 4
    assert p_phi("A2", 3) == 3
    assert p_phi("E8", 2) == 32
    assert p_phi("E8", 5) == 125
    assert p_phi("D5", 2) == 16
    assert p_phi("D5", 3) == 9
    assert p_phi("E7", 19) == 19
    with pytest.raises(UnknownLabelError):
        p_phi("B2", 2)


def test_pphi_is_power_of_p() -> None:
    """Every value is a positive power of p, and equals p once p >= kappa."""
    table = default_table()
    for label, kappa in table.kappa.items():
        for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            value = table.p_phi(label, p)
            assert value >= kappa or value == p
            while value % p == 0:
                value //= p
            assert value == 1
            if p >= kappa:
                assert table.p_phi(label, p) == p


def test_pphi_overrides() -> None:
    """Explicit values and kappa overrides layer over the defaults."""
    table = PPhiTable.from_mapping(
        {"kappa": {"E8": 40}, "values": {"A2": {2: 8}}}, base=default_table()
    )
    assert table.p_phi("A2", 2) == 8
    assert table.p_phi("A2", 5) == 5
    assert table.p_phi("E8", 37) == 37**2
    assert table.p_phi("E7", 2) == 32


@pytest.mark.parametrize(
    "data",
    [
        {"values": {"A2": {2: 6}}},
        {"values": {"A2": {4: 16}}},
        {"values": {"E8": {37: 37**2}}},
        {"kappa": {"B2": 3}},
        {"kappa": {"A2": 0}},
    ],
)
def test_pphi_rejects_invalid_overrides(data: dict) -> None:
    """Values must be powers of a prime p; labels must be known."""
    with pytest.raises(ConfigError):
        PPhiTable.from_mapping(data, base=default_table())


def test_pphi_from_file(tmp_path: Path) -> None:
    """YAML override files are validated and merged."""
    path = tmp_path / "pphi.yaml"
    path.write_text("values:\n  A3:\n    3: 27\n", encoding="utf-8")
    table = PPhiTable.from_file(path)
    assert table.p_phi("A3", 3) == 27
    assert table.p_phi("A3", 2) == 4

    path.write_text("- not a mapping\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        PPhiTable.from_file(path)
    with pytest.raises(ConfigError):
        PPhiTable.from_file(tmp_path / "missing.yaml")


def test_order_table_shape() -> None:
    """67 templates in families 1-11."""
    assert len(ORDER_TABLE) == 67
    assert sum(FAMILY_SIGNATURE) == 67


@pytest.mark.parametrize("q", SAMPLE_Q)
def test_nu_family_signature(q: int) -> None:
    """Every q yields the same family counts."""
    orders = nu_e8(q)
    assert orders.family_signature() == FAMILY_SIGNATURE
    assert len(orders.values()) == 67
    assert [entry.position for entry in orders.family(1)] == list(range(1, 22))


@pytest.mark.parametrize("q", CANDIDATE_Q)
def test_nu_entries_divide_group_order(q: int) -> None:
    """Every listed order divides |E8(q)|."""
    order = e8_order(q)
    assert all(order % value == 0 for value in nu_e8(q).values())


def test_family_one_ignores_pphi_table() -> None:
    """Family (1) is the same under any p(Phi) table; multiplied families are not."""
    inflated = PPhiTable.from_mapping(
        {"kappa": {label: 1000 for label in PPHI_LABELS}}, base=default_table()
    )
    for q in SAMPLE_Q:
        default = nu_e8(q)
        other = nu_e8(q, inflated)
        assert [entry.value for entry in default.family(1)] == [
            entry.value for entry in other.family(1)
        ]
    assert nu_e8(2).family(11)[0].value == 32
    assert nu_e8(2, inflated).family(11)[0].value == 1024


def test_nu_values_at_two() -> None:
    """Spot values at q = 2."""
    orders = nu_e8(2)
    family1 = {entry.expression: entry.value for entry in orders.family(1)}
    assert family1["q^8-q^6+q^4-q^2+1"] == 205
    assert family1["q^8+q^7-q^5-q^4-q^3+q+1"] == 331
    assert family1["q^8-q^7+q^5-q^4+q^3-q+1"] == 151
    (last,) = orders.family(11)
    assert last.value == 32
    assert last.expression == "p(E8)"
    family2 = orders.family(2)
    assert family2[0].expression == "p*[(q^2-q+1)(q^5+1)]"
    assert family2[0].value == 2 * 3 * 33


def test_gcd_divided_entries() -> None:
    """The (3, q-1), (3, q+1) and (2, q-1) divisors apply exactly."""
    # q = 4: 3 | q - 1
    family1 = {entry.expression: entry.value for entry in nu_e8(4).family(1)}
    assert family1["(q^2+q+1)(q^6+q^3+1)/(3,q-1)"] == 21 * 4161 // 3
    assert family1["(q^2-q+1)(q^6-q^3+1)/(3,q+1)"] == 13 * 4033
    # q = 5: 3 | q + 1, 2 | q - 1
    family1 = {entry.expression: entry.value for entry in nu_e8(5).family(1)}
    assert family1["(q^2-q+1)(q^6-q^3+1)/(3,q+1)"] == 21 * 15501 // 3
    family6 = {entry.expression: entry.value for entry in nu_e8(5).family(6)}
    assert family6["p(A5)*[(q^4-1)/(2,q-1)]"] == 25 * 624 // 2


def test_in_spectrum_examples() -> None:
    """Membership is divisibility of some listed order."""
    assert in_spectrum(2, 1)
    assert in_spectrum(2, 205)
    assert in_spectrum(2, 331)
    assert not in_spectrum(2, e8_order(2))
    assert in_spectrum(5, 125)
    assert not in_spectrum(5, 625)
    with pytest.raises(PreconditionError):
        in_spectrum(2, 0)


@pytest.mark.parametrize("q", [2, 4, 5, 11])
def test_in_spectrum_divisor_closed(q: int) -> None:
    """Divisors of element orders are element orders."""
    orders = nu_e8(q)
    for m in range(1, 3000):
        if in_spectrum(q, m, orders=orders):
            assert all(in_spectrum(q, d, orders=orders) for d in divisors(m)), m


@pytest.mark.parametrize("q", [2, 4, 5, 9, 11])
def test_mu_is_divisibility_maximal(q: int) -> None:
    """mu keeps exactly the orders no other order is a multiple of."""
    values = set(nu_e8(q).values())
    mu = mu_e8(q)
    assert list(mu) == sorted(set(mu))
    assert set(mu) <= values
    for value in mu:
        assert not any(other != value and other % value == 0 for other in mu)
    for value in values:
        assert any(top % value == 0 for top in mu)


def test_lemma5_example() -> None:
    """T for q = 11 is excluded from the spectrum of E8(5)."""
    result = lemma5_check(5, 11)
    assert result.witness == 216130320
    assert result.excluded
    assert result.t0 == (11**4 - 1) * (11**2 - 11 + 1)
    assert result.max_nu == max(nu_e8(5).values())
    assert result.witness > result.max_nu
    assert lemma5_check(11, 16).excluded


def test_lemma5_preconditions() -> None:
    """p must be a prime below q, both in the candidate classes."""
    with pytest.raises(PreconditionError):
        lemma5_check(5, 4)
    with pytest.raises(PreconditionError):
        lemma5_check(4, 5)
    with pytest.raises(PreconditionError):
        lemma5_check(5, 7)
    with pytest.raises(PreconditionError):
        lemma5_check(5, 5)


def test_lemma5_all_pairs_to_100() -> None:
    """Every candidate pair p < q <= 100 is excluded."""
    classes = (0, 1, 4)
    thetas = [q for q in range(2, 101) if trial_is_prime_power(q) and q % 5 in classes]
    primes = [p for p in thetas if is_prime(p)]
    checked = 0
    for p in primes:
        for q in thetas:
            if q <= p:
                continue
            assert lemma5_check(p, q).excluded, (p, q)
            checked += 1
    assert checked == 85
