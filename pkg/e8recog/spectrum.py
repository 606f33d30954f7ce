"""Element orders of E8(q): the nu list, spectrum membership and the (q^2+1)(q^6-1) witness.

The 67 orders are transcribed once into ORDER_TABLE as products of small
integer polynomials divided by exact divisors, so every entry can be
audited line by line and evaluated exactly without parsing anything.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cache
import logging
from math import prod
from pathlib import Path
from typing import Any

import voluptuous as vol
import yaml

from .arith import gcd, is_prime
from .const import DEFAULT_CLASSES, PPHI_LABELS
from .exceptions import (
    ConfigError,
    InexactDivisionError,
    PreconditionError,
    UnknownLabelError,
)
from .factorizer import FactorCache, as_prime_power
from .types import Lemma5Result, OrderEntry, OrderList, PrimePowerQ

_LOGGER = logging.getLogger(__name__)

PPHI_DEFAULTS_PATH = Path(__file__).parent / "pphi_defaults.yaml"

_POSITIVE_INT = vol.All(int, vol.Range(min=1))

PPHI_SCHEMA = vol.Schema(
    {
        vol.Required("kappa", default=dict): {vol.In(PPHI_LABELS): _POSITIVE_INT},
        vol.Optional("values", default=dict): {
            vol.In(PPHI_LABELS): {
                vol.All(vol.Coerce(int), vol.Range(min=2)): vol.All(
                    int, vol.Range(min=2)
                )
            }
        },
    }
)


@dataclass(frozen=True)
class PPhiTable:
    """p(Phi) rule per sub-system label.

    By default p(Phi) is the smallest power of p that is >= kappa(Phi);
    explicit per-characteristic values take precedence.
    """

    kappa: Mapping[str, int]
    values: Mapping[str, Mapping[int, int]] = field(default_factory=dict)

    def p_phi(self, label: str, p: int) -> int:
        """Return p(Phi) for label in characteristic p."""
        if label not in self.kappa:
            raise UnknownLabelError(label)
        explicit = self.values.get(label, {}).get(p)
        if explicit is not None:
            return explicit
        power = p
        while power < self.kappa[label]:
            power *= p
        return power

    @classmethod
    def from_mapping(
        cls, data: Mapping[str, Any], base: PPhiTable | None = None
    ) -> PPhiTable:
        """Build a table from a mapping, layered over base when given."""
        try:
            config = PPHI_SCHEMA(dict(data or {}))
        except vol.Invalid as err:
            raise ConfigError(f"invalid p(Phi) table: {err}") from err

        kappa = dict(base.kappa) if base is not None else {}
        kappa.update(config["kappa"])
        missing = [label for label in PPHI_LABELS if label not in kappa]
        if missing:
            raise ConfigError(f"p(Phi) table lacks kappa for {', '.join(missing)}")

        values: dict[str, dict[int, int]] = {}
        if base is not None:
            values = {label: dict(per_p) for label, per_p in base.values.items()}
        for label, per_p in config["values"].items():
            for p, value in per_p.items():
                _check_explicit_value(label, p, value, kappa[label])
                values.setdefault(label, {})[p] = value
        return cls(kappa=kappa, values=values)

    @classmethod
    def from_file(cls, path: str | Path) -> PPhiTable:
        """Load a YAML override file layered over the shipped defaults."""
        try:
            with open(path, encoding="utf-8") as handle:
                data = yaml.safe_load(handle) or {}
        except OSError as err:
            raise ConfigError(f"cannot read p(Phi) table {path}: {err}") from err
        except yaml.YAMLError as err:
            raise ConfigError(f"cannot parse p(Phi) table {path}: {err}") from err
        if not isinstance(data, dict):
            raise ConfigError(f"p(Phi) table {path} must be a mapping")
        _LOGGER.info("Loaded p(Phi) overrides from %s", path)
        return cls.from_mapping(data, base=default_table())


def _check_explicit_value(label: str, p: int, value: int, kappa: int) -> None:
    if not is_prime(p):
        raise ConfigError(f"p(Phi) value for {label} given for non-prime {p}")
    power = p
    while power < value:
        power *= p
    if power != value:
        raise ConfigError(f"p({label}) = {value} is not a power of {p}")
    if p >= kappa and value != p:
        raise ConfigError(f"p({label}) must be {p} for p >= {kappa}, got {value}")


@cache
def default_table() -> PPhiTable:
    """Return the shipped p(Phi) table, loaded once."""
    with open(PPHI_DEFAULTS_PATH, encoding="utf-8") as handle:
        data = yaml.safe_load(handle)
    return PPhiTable.from_mapping(data)


def p_phi(label: str, p: int, table: PPhiTable | None = None) -> int:
    """Return the configured p(Phi) for label and characteristic p."""
    return (table or default_table()).p_phi(label, p)


@dataclass(frozen=True)
class Poly:
    """Integer polynomial in q given as (exponent, coefficient) terms."""

    terms: tuple[tuple[int, int], ...]

    def __call__(self, q: int) -> int:
        """Evaluate at q."""
        return sum(coefficient * q**exponent for exponent, coefficient in self.terms)


@dataclass(frozen=True)
class GcdWith:
    """The divisor gcd(n, poly(q))."""

    n: int
    poly: Poly

    def __call__(self, q: int) -> int:
        """Evaluate at q."""
        return gcd(self.n, self.poly(q))


@dataclass(frozen=True)
class OrderTemplate:
    """One entry of the order table: product of polynomials over exact divisors."""

    family: int
    expression: str
    numerator: tuple[Poly, ...]
    denominator: tuple[Poly | GcdWith, ...] = ()

    def evaluate(self, q: int) -> int:
        """Return the exact value at q."""
        numerator = prod(poly(q) for poly in self.numerator)
        denominator = prod(divisor(q) for divisor in self.denominator)
        value, remainder = divmod(numerator, denominator)
        if remainder:
            raise InexactDivisionError(numerator, denominator, self.expression)
        return value


def _p(*terms: tuple[int, int]) -> Poly:
    return Poly(terms)


def _binomial(n: int, c: int) -> Poly:
    """q^n + c."""
    return _p((n, 1), (0, c))


QM1, QP1 = _binomial(1, -1), _binomial(1, 1)
Q2M1, Q2P1 = _binomial(2, -1), _binomial(2, 1)
Q3M1, Q3P1 = _binomial(3, -1), _binomial(3, 1)
Q4M1, Q4P1 = _binomial(4, -1), _binomial(4, 1)
Q5M1, Q5P1 = _binomial(5, -1), _binomial(5, 1)
Q6M1, Q6P1 = _binomial(6, -1), _binomial(6, 1)
Q7M1, Q7P1 = _binomial(7, -1), _binomial(7, 1)
Q8M1 = _binomial(8, -1)
Q2_Q_1 = _p((2, 1), (1, 1), (0, 1))
Q2_MQ_1 = _p((2, 1), (1, -1), (0, 1))
Q4_MQ2_1 = _p((4, 1), (2, -1), (0, 1))
Q6_Q3_1 = _p((6, 1), (3, 1), (0, 1))
Q6_MQ3_1 = _p((6, 1), (3, -1), (0, 1))
GCD3_QM1 = GcdWith(3, QM1)
GCD3_QP1 = GcdWith(3, QP1)
GCD2_QM1 = GcdWith(2, QM1)


def _t(family: int, expression: str, *numerator: Poly, over: tuple = ()) -> OrderTemplate:
    return OrderTemplate(family, expression, numerator, over)


ORDER_TABLE: tuple[OrderTemplate, ...] = (
    # (1)
    _t(1, "(q+1)(q^2+q+1)(q^5-1)", QP1, Q2_Q_1, Q5M1),
    _t(1, "(q-1)(q^2-q+1)(q^5+1)", QM1, Q2_MQ_1, Q5P1),
    _t(1, "(q+1)(q^2+1)(q^5-1)", QP1, Q2P1, Q5M1),
    _t(1, "(q-1)(q^2+1)(q^5+1)", QM1, Q2P1, Q5P1),
    _t(1, "(q+1)(q^7-1)", QP1, Q7M1),
    _t(1, "(q-1)(q^7+1)", QM1, Q7P1),
    _t(1, "q^8-1", Q8M1),
    _t(1, "(q+1)(q^3-1)(q^4+1)", QP1, Q3M1, Q4P1),
    _t(1, "(q-1)(q^3+1)(q^4+1)", QM1, Q3P1, Q4P1),
    _t(1, "(q^2+1)(q^6-1)", Q2P1, Q6M1),
    _t(1, "(q^2-1)(q^6+1)", Q2M1, Q6P1),
    _t(1, "(q^2-1)(q^2+q+1)(q^4-q^2+1)", Q2M1, Q2_Q_1, Q4_MQ2_1),
    _t(1, "(q^2-1)(q^2-q+1)(q^4-q^2+1)", Q2M1, Q2_MQ_1, Q4_MQ2_1),
    _t(1, "(q^2-1)(q^6-q^3+1)", Q2M1, Q6_MQ3_1),
    _t(1, "(q^2-1)(q^6+q^3+1)", Q2M1, Q6_Q3_1),
    _t(1, "(q^2+q+1)(q^6+q^3+1)/(3,q-1)", Q2_Q_1, Q6_Q3_1, over=(GCD3_QM1,)),
    _t(1, "(q^2-q+1)(q^6-q^3+1)/(3,q+1)", Q2_MQ_1, Q6_MQ3_1, over=(GCD3_QP1,)),
    _t(1, "q^8+q^7-q^5-q^4-q^3+q+1",
       _p((8, 1), (7, 1), (5, -1), (4, -1), (3, -1), (1, 1), (0, 1))),
    _t(1, "q^8-q^7+q^5-q^4+q^3-q+1",
       _p((8, 1), (7, -1), (5, 1), (4, -1), (3, 1), (1, -1), (0, 1))),
    _t(1, "q^8-q^4+1", _p((8, 1), (4, -1), (0, 1))),
    _t(1, "q^8-q^6+q^4-q^2+1", _p((8, 1), (6, -1), (4, 1), (2, -1), (0, 1))),
    # (2): multiplied by p
    _t(2, "(q^2-q+1)(q^5+1)", Q2_MQ_1, Q5P1),
    _t(2, "(q^2+q+1)(q^5-1)", Q2_Q_1, Q5M1),
    _t(2, "(q+1)(q^6-q^3+1)", QP1, Q6_MQ3_1),
    _t(2, "(q-1)(q^6+q^3+1)", QM1, Q6_Q3_1),
    _t(2, "q^7+1", Q7P1),
    _t(2, "q^7-1", Q7M1),
    _t(2, "(q^3-1)(q^4-q^2+1)", Q3M1, Q4_MQ2_1),
    _t(2, "(q^3+1)(q^4-q^2+1)", Q3P1, Q4_MQ2_1),
    _t(2, "(q^8-1)/((q-1)(2,q-1))", Q8M1, over=(QM1, GCD2_QM1)),
    _t(2, "(q^8-1)/((q+1)(2,q-1))", Q8M1, over=(QP1, GCD2_QM1)),
    _t(2, "q^6+1", Q6P1),
    # (3): multiplied by p(A2)
    _t(3, "q^6-1", Q6M1),
    _t(3, "q^6+q^3+1", Q6_Q3_1),
    _t(3, "q^6-q^3+1", Q6_MQ3_1),
    _t(3, "(q^2+q+1)(q^4-q^2+1)", Q2_Q_1, Q4_MQ2_1),
    _t(3, "(q^2-q+1)(q^4-q^2+1)", Q2_MQ_1, Q4_MQ2_1),
    _t(3, "(q^2-q+1)(q^4-1)", Q2_MQ_1, Q4M1),
    _t(3, "(q^2+q+1)(q^4-1)", Q2_Q_1, Q4M1),
    _t(3, "(q^2-1)(q^4+1)", Q2M1, Q4P1),
    _t(3, "(q+1)(q^5-1)", QP1, Q5M1),
    _t(3, "(q-1)(q^5+1)", QM1, Q5P1),
    # (4): multiplied by p(A3)
    _t(4, "q^5-1", Q5M1),
    _t(4, "q^5+1", Q5P1),
    _t(4, "(q^4+1)(q-1)", Q4P1, QM1),
    _t(4, "(q^4+1)(q+1)", Q4P1, QP1),
    _t(4, "(q^3-1)(q^2+1)", Q3M1, Q2P1),
    _t(4, "(q^3+1)(q^2+1)", Q3P1, Q2P1),
    # (5): multiplied by p(A4)
    _t(5, "(q^5-1)/(q-1)", Q5M1, over=(QM1,)),
    _t(5, "(q^5+1)/(q+1)", Q5P1, over=(QP1,)),
    _t(5, "q^4-1", Q4M1),
    # (6): multiplied by p(A5)
    _t(6, "(q^3-1)(q+1)", Q3M1, QP1),
    _t(6, "(q^3+1)(q-1)", Q3P1, QM1),
    _t(6, "q^4+1", Q4P1),
    _t(6, "(q^4-1)/(2,q-1)", Q4M1, over=(GCD2_QM1,)),
    _t(6, "q^4-q^2+1", Q4_MQ2_1),
    # (7): multiplied by p(D5)
    _t(7, "(q^2+1)(q-1)", Q2P1, QM1),
    _t(7, "(q^2+1)(q+1)", Q2P1, QP1),
    _t(7, "q^3-1", Q3M1),
    _t(7, "q^3+1", Q3P1),
    # (8): multiplied by p(D6)
    _t(8, "q^2+1", Q2P1),
    # (9): multiplied by p(E6)
    _t(9, "q^2-q+1", Q2_MQ_1),
    _t(9, "q^2+q+1", Q2_Q_1),
    _t(9, "q^2-1", Q2M1),
    # (10): multiplied by p(E7)
    _t(10, "q-1", QM1),
    _t(10, "q+1", QP1),
    # (11): p(E8) alone
    _t(11, "1"),
)

# Multiplier per family: None, the characteristic, or a p(Phi) label.
FAMILY_MULTIPLIERS: dict[int, str | None] = {
    1: None,
    2: "p",
    3: "A2",
    4: "A3",
    5: "A4",
    6: "A5",
    7: "D5",
    8: "D6",
    9: "E6",
    10: "E7",
    11: "E8",
}


def _as_q(q: PrimePowerQ | int, cache: FactorCache | None = None) -> PrimePowerQ:
    return q if isinstance(q, PrimePowerQ) else as_prime_power(q, cache)


def _multiplier(family: int, p: int, table: PPhiTable) -> tuple[int, str | None]:
    label = FAMILY_MULTIPLIERS[family]
    if label is None:
        return 1, None
    if label == "p":
        return p, "p"
    return table.p_phi(label, p), f"p({label})"


def nu_e8(q: PrimePowerQ | int, table: PPhiTable | None = None) -> OrderList:
    """Return the 67 element orders of E8(q), tagged with family and expression."""
    prime_power = _as_q(q)
    table = table or default_table()
    entries = []
    positions: dict[int, int] = {}
    for template in ORDER_TABLE:
        factor, prefix = _multiplier(template.family, prime_power.s, table)
        position = positions.get(template.family, 0) + 1
        positions[template.family] = position
        if template.family == 11:
            expression = str(prefix)
        elif prefix is None:
            expression = template.expression
        else:
            expression = f"{prefix}*[{template.expression}]"
        entries.append(
            OrderEntry(
                family=template.family,
                position=position,
                expression=expression,
                value=factor * template.evaluate(prime_power.q),
            )
        )
    return OrderList(q=prime_power, entries=tuple(entries))


def in_spectrum(
    q: PrimePowerQ | int,
    m: int,
    table: PPhiTable | None = None,
    orders: OrderList | None = None,
) -> bool:
    """Return True iff m divides one of the 67 orders, i.e. m is an element order."""
    if m < 1:
        raise PreconditionError(f"element orders are positive, got {m}")
    orders = orders or nu_e8(q, table)
    return any(value % m == 0 for value in orders.values())


def mu_e8(q: PrimePowerQ | int, table: PPhiTable | None = None) -> tuple[int, ...]:
    """Return the divisibility-maximal orders among nu(E8(q)), ascending."""
    values = sorted(set(nu_e8(q, table).values()))
    return tuple(
        value
        for value in values
        if not any(other != value and other % value == 0 for other in values)
    )


def lemma5_check(
    p: PrimePowerQ | int,
    q: PrimePowerQ | int,
    table: PPhiTable | None = None,
    classes: tuple[int, ...] = DEFAULT_CLASSES,
) -> Lemma5Result:
    """Check that T = (q^2+1)(q^6-1) is an order of E8(q) but not of E8(p).

    Every T' in families (3)-(11) for E8(p) has p'-part below
    T0 = (q^4-1)(q^2-q+1), the lower bound for the p'-part of T, so
    excluded must come out True; a False result is logged as a finding.
    """
    small = _as_q(p)
    large = _as_q(q)
    if not small.is_prime:
        raise PreconditionError(f"p must be prime, got {small.q}")
    if small.q >= large.q:
        raise PreconditionError(f"need p < q, got p={small.q}, q={large.q}")
    for value in (small.q, large.q):
        if value % 5 not in classes:
            raise PreconditionError(
                f"{value} is not in the residue classes {classes} mod 5"
            )

    witness = (large.q**2 + 1) * (large.q**6 - 1)
    orders = nu_e8(small, table)
    excluded = not in_spectrum(small, witness, orders=orders)
    if not excluded:
        _LOGGER.warning(
            "T = %d for q = %d lies in the spectrum of E8(%d)",
            witness,
            large.q,
            small.q,
        )
    return Lemma5Result(
        p=small.q,
        q=large.q,
        witness=witness,
        excluded=excluded,
        t0=(large.q**4 - 1) * (large.q**2 - large.q + 1),
        max_nu=max(orders.values()),
    )
