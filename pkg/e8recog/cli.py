"""Command-line front end.

Every subcommand delegates to the library operation of the same name and
renders the result as text or JSON (CSV for verify). Exit codes: 0 on
success, 1 on computational failure, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
from collections.abc import Sequence
from dataclasses import dataclass
import logging
import os
from pathlib import Path
import sys
from typing import Any

import voluptuous as vol

from .const import (
    DEFAULT_CACHE_FILE,
    DEFAULT_CLASSES,
    DEFAULT_VERIFY_BOUND,
    DOMAIN,
    ENV_CACHE_PATH,
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    LOGGER,
    SLOW_BOUND_THRESHOLD,
)
from .cyclotomic import holder_values, pi_e8_detailed
from .exceptions import (
    CacheError,
    ConfigError,
    E8RecogError,
    NotPrimePowerError,
    PreconditionError,
    UnknownLabelError,
)
from .factorizer import FactorCache, as_prime_power, factor
from .primegraph import adjacency_lines, gk_e8
from .render import (
    cache_stats_payload,
    cache_verify_payload,
    factor_payload,
    gk_payload,
    lemma5_payload,
    member_payload,
    pi_payload,
    render_csv,
    render_json,
    render_text,
    report_payload,
    spectrum_payload,
)
from .spectrum import PPhiTable, default_table, in_spectrum, lemma5_check, mu_e8, nu_e8
from .types import OutputFormat
from .verifier import run

_LOGGER = logging.getLogger(__name__)

COMMANDS = ("factor", "pi", "spectrum", "member", "gk", "lemma5", "verify", "cache")


def _decimal(text: str) -> int:
    """argparse type: a non-negative decimal integer."""
    if not text.isdecimal():
        raise argparse.ArgumentTypeError(f"{text!r} is not a decimal integer")
    return int(text, 10)


def _classes(text: str) -> tuple[int, ...]:
    """argparse type: comma-separated residue classes, deduplicated and sorted."""
    try:
        return tuple(sorted({_decimal(part.strip()) for part in text.split(",")}))
    except argparse.ArgumentTypeError as err:
        raise argparse.ArgumentTypeError(f"invalid classes {text!r}: {err}") from err


def _check_format(config: dict[str, Any]) -> dict[str, Any]:
    """Reject CSV output for commands other than verify."""
    if config["output_format"] is OutputFormat.CSV and config["command"] != "verify":
        raise vol.Invalid("--format csv is only supported by verify")
    return config


def _check_slow(config: dict[str, Any]) -> dict[str, Any]:
    """Require --slow for sweeps beyond the slow-bound threshold."""
    if (
        config["command"] == "verify"
        and config["bound"] > SLOW_BOUND_THRESHOLD
        and not config["slow"]
    ):
        raise vol.Invalid(
            f"--bound above {SLOW_BOUND_THRESHOLD} runs for hours; pass --slow to confirm"
        )
    return config


CONFIG_SCHEMA = vol.All(
    vol.Schema(
        {
            vol.Required("command"): vol.In(COMMANDS),
            vol.Required("cache_path"): vol.Coerce(Path),
            vol.Required("output_format"): vol.Coerce(OutputFormat),
            vol.Required("classes"): vol.All(
                vol.Coerce(list),
                [vol.All(int, vol.Range(min=0, max=4))],
                vol.Length(min=1),
                vol.Coerce(tuple),
            ),
            vol.Optional("pphi_table"): vol.Any(None, vol.Coerce(Path)),
            vol.Required("verbosity"): vol.All(int, vol.Range(min=0)),
            vol.Optional("jobs", default=1): vol.All(int, vol.Range(min=1)),
            vol.Optional("bound", default=DEFAULT_VERIFY_BOUND): vol.All(
                int, vol.Range(min=2)
            ),
            vol.Optional("slow", default=False): bool,
            vol.Optional("resume", default=False): bool,
            vol.Optional("report"): vol.Any(None, vol.Coerce(Path)),
            vol.Optional("flush_interval"): vol.Any(
                None, vol.All(vol.Coerce(float), vol.Range(min=0))
            ),
            vol.Optional("progress", default=True): bool,
        },
        extra=vol.ALLOW_EXTRA,
    ),
    _check_format,
    _check_slow,
)


@dataclass(frozen=True)
class CliConfig:
    """Validated settings for one invocation."""

    command: str
    cache_path: Path
    output_format: OutputFormat
    classes: tuple[int, ...]
    verbosity: int
    pphi_table: Path | None = None
    jobs: int = 1
    bound: int = DEFAULT_VERIFY_BOUND
    slow: bool = False
    resume: bool = False
    report: Path | None = None
    flush_interval: float | None = None
    progress: bool = True
    options: dict[str, Any] | None = None

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> CliConfig:
        """Validate parsed arguments, raising ConfigError on bad combinations."""
        raw = vars(args).copy()
        raw["cache_path"] = resolve_cache_path(raw.pop("cache"))
        raw["output_format"] = raw.pop("format")
        raw["verbosity"] = raw.pop("verbose")
        raw["progress"] = not raw.pop("no_progress", False)
        try:
            config = CONFIG_SCHEMA(raw)
        except vol.Invalid as err:
            raise ConfigError(str(err)) from err
        fields = {name for name in cls.__dataclass_fields__ if name != "options"}
        return cls(
            **{name: config[name] for name in fields if name in config},
            options={key: value for key, value in config.items() if key not in fields},
        )

    def option(self, name: str, default: Any = None) -> Any:
        """Return a subcommand-specific argument."""
        return (self.options or {}).get(name, default)


def resolve_cache_path(flag: str | None) -> Path:
    """Return --cache, else $E8RECOG_CACHE, else the default file name."""
    if flag:
        return Path(flag)
    return Path(os.environ.get(ENV_CACHE_PATH) or DEFAULT_CACHE_FILE)


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser."""
    parser = argparse.ArgumentParser(
        prog=DOMAIN,
        description="Prime sets, spectra and prime graphs of E8(q), and the"
        " recognizability sweep over candidate primes.",
    )
    parser.add_argument("--cache", help=f"factor cache file (default ${ENV_CACHE_PATH}"
                        f" or {DEFAULT_CACHE_FILE})")
    parser.add_argument(
        "--format",
        default=OutputFormat.TEXT.value,
        choices=[item.value for item in OutputFormat],
        help="output format (csv only for verify)",
    )
    parser.add_argument(
        "--classes",
        type=_classes,
        default=DEFAULT_CLASSES,
        help="residue classes mod 5 for candidates, e.g. 0,1,4",
    )
    parser.add_argument("--pphi-table", dest="pphi_table", help="YAML p(Phi) overrides")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v info, -vv debug"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cmd = sub.add_parser("factor", help="factor a natural number")
    cmd.add_argument("n", type=_decimal)

    cmd = sub.add_parser("pi", help="prime divisors of |E8(q)|")
    cmd.add_argument("q", type=_decimal)
    cmd.add_argument("--holders", action="store_true", help="also list the 15 holder values")

    cmd = sub.add_parser("spectrum", help="the 67 element orders of E8(q)")
    cmd.add_argument("q", type=_decimal)
    cmd.add_argument("--mu", action="store_true", help="also list the maximal orders")

    cmd = sub.add_parser("member", help="is m an element order of E8(q)")
    cmd.add_argument("q", type=_decimal)
    cmd.add_argument("m", type=_decimal)

    cmd = sub.add_parser("gk", help="Gruenberg-Kegel graph of E8(q)")
    cmd.add_argument("q", type=_decimal)
    cmd.add_argument("--adjacency", help="write an adjacency list to this file")

    cmd = sub.add_parser("lemma5", help="check the T = (q^2+1)(q^6-1) witness")
    cmd.add_argument("p", type=_decimal)
    cmd.add_argument("q", type=_decimal)

    cmd = sub.add_parser("verify", help="run the sweep over candidate primes")
    cmd.add_argument("--bound", type=_decimal, default=DEFAULT_VERIFY_BOUND)
    cmd.add_argument("--jobs", type=_decimal, default=1)
    cmd.add_argument("--slow", action="store_true", help=f"allow bounds above {SLOW_BOUND_THRESHOLD}")
    cmd.add_argument("--resume", action="store_true", help="reuse cached factorizations")
    cmd.add_argument("--report", help="write the full report to this file")
    cmd.add_argument("--flush-interval", dest="flush_interval", type=float,
                     help="save the cache at most every N seconds during the run")
    cmd.add_argument("--no-progress", dest="no_progress", action="store_true")

    cmd = sub.add_parser("cache", help="inspect the factor cache")
    cmd.add_argument("action", choices=["stats", "verify"])
    cmd.add_argument("--prune", action="store_true", help="drop corrupt entries and save")
    return parser


def _configure_logging(verbosity: int) -> None:
    """Set the package log level from -v and attach a stderr handler once."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    LOGGER.setLevel(level)
    if not LOGGER.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        LOGGER.addHandler(handler)


def _write_file(path: Path, text: str) -> None:
    """Write an output file, reporting failures as a usage error."""
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot write {path}: {err}") from err


def _emit(config: CliConfig, kind: str, payload: dict[str, Any]) -> str:
    """Render a payload in the configured format."""
    if config.output_format is OutputFormat.JSON:
        return render_json(payload)
    return render_text(kind, payload)


def cmd_factor(config: CliConfig, cache: FactorCache, table: PPhiTable) -> str:
    """Factor n and render the factorization."""
    n = config.option("n")
    if n < 1:
        raise PreconditionError("factor needs n >= 1")
    return _emit(config, "factor", factor_payload(factor(n, cache)))


def cmd_pi(config: CliConfig, cache: FactorCache, table: PPhiTable) -> str:
    """Render pi(E8(q)) with its cyclotomic breakdown."""
    q = as_prime_power(config.option("q"), cache)
    holders = holder_values(q.q) if config.option("holders") else None
    return _emit(config, "pi", pi_payload(pi_e8_detailed(q, cache), holders))


def cmd_spectrum(config: CliConfig, cache: FactorCache, table: PPhiTable) -> str:
    """Render the 67 element orders of E8(q), optionally with mu."""
    q = as_prime_power(config.option("q"), cache)
    mu = mu_e8(q, table) if config.option("mu") else None
    return _emit(config, "spectrum", spectrum_payload(nu_e8(q, table), mu))


def cmd_member(config: CliConfig, cache: FactorCache, table: PPhiTable) -> str:
    """Render whether m is an element order of E8(q)."""
    q = as_prime_power(config.option("q"), cache)
    m = config.option("m")
    return _emit(config, "member", member_payload(q.q, m, in_spectrum(q, m, table)))


def cmd_gk(config: CliConfig, cache: FactorCache, table: PPhiTable) -> str:
    """Render GK(E8(q)) and optionally write its adjacency list."""
    q = as_prime_power(config.option("q"), cache)
    graph = gk_e8(q, table, cache)
    adjacency = config.option("adjacency")
    if adjacency:
        _write_file(Path(adjacency), "\n".join(adjacency_lines(graph)) + "\n")
        _LOGGER.info("Wrote adjacency list to %s", adjacency)
    return _emit(config, "gk", gk_payload(q.q, graph))


def cmd_lemma5(config: CliConfig, cache: FactorCache, table: PPhiTable) -> str:
    """Render the (q^2+1)(q^6-1) witness check for p < q."""
    p = as_prime_power(config.option("p"), cache)
    q = as_prime_power(config.option("q"), cache)
    result = lemma5_check(p, q, table, config.classes)
    return _emit(config, "lemma5", lemma5_payload(result))


def cmd_verify(config: CliConfig, cache: FactorCache, table: PPhiTable) -> str:
    """Run the sweep and render or write its report."""
    report = run(
        config.bound,
        jobs=config.jobs,
        cache=cache,
        classes=config.classes,
        progress=config.progress and sys.stderr.isatty(),
        flush_interval=config.flush_interval,
    )
    payload = report_payload(report)
    if config.report is not None:
        if config.output_format is OutputFormat.CSV:
            _write_file(config.report, render_csv(report))
        else:
            _write_file(config.report, render_json(payload))
        _LOGGER.info("Wrote report to %s", config.report)
    if config.output_format is OutputFormat.CSV:
        return render_csv(report)
    return _emit(config, "report", payload)


def cmd_cache(config: CliConfig, cache: FactorCache, table: PPhiTable) -> str:
    """Show cache statistics or re-verify entries, pruning on request."""
    if config.option("action") == "stats":
        return _emit(config, "cache_stats", cache_stats_payload(cache.stats()))

    corrupt = cache.verify()
    problems = [*cache.rejected, *corrupt]
    checked = len(cache) + len(cache.rejected)
    pruned = 0
    if config.option("prune") and problems:
        pruned = len(cache.rejected) + cache.discard(value for value, _ in corrupt)
        cache.save()
    payload = cache_verify_payload(checked, problems, pruned)
    return _emit(config, "cache_verify", payload)


HANDLERS = {
    "factor": cmd_factor,
    "pi": cmd_pi,
    "spectrum": cmd_spectrum,
    "member": cmd_member,
    "gk": cmd_gk,
    "lemma5": cmd_lemma5,
    "verify": cmd_verify,
    "cache": cmd_cache,
}


def _fail(message: str, code: int) -> int:
    """Print an error line to stderr and return the exit code."""
    sys.stderr.write(f"{DOMAIN}: error: {message}\n")
    return code


def _save_partial(cache: FactorCache | None) -> None:
    """Keep factorizations finished before a failure."""
    if cache is None or not cache.dirty or cache.path is None:
        return
    try:
        cache.save()
    except CacheError as err:
        _LOGGER.warning("Could not save factor cache: %s", err)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code else EXIT_OK

    try:
        config = CliConfig.from_namespace(args)
        _configure_logging(config.verbosity)
        table = (
            PPhiTable.from_file(config.pphi_table)
            if config.pphi_table is not None
            else default_table()
        )
    except ConfigError as err:
        return _fail(str(err), EXIT_USAGE)

    lookups = config.command != "verify" or config.resume
    cache = None
    try:
        cache = FactorCache.load(config.cache_path, lookups=lookups)
        output = HANDLERS[config.command](config, cache, table)
        if cache.dirty:
            cache.save()
    except (NotPrimePowerError, PreconditionError, UnknownLabelError, ConfigError) as err:
        _save_partial(cache)
        return _fail(str(err), EXIT_USAGE)
    except E8RecogError as err:
        _LOGGER.debug("Computation failed", exc_info=True)
        _save_partial(cache)
        return _fail(str(err), EXIT_FAILURE)
    except KeyboardInterrupt:
        _save_partial(cache)
        return _fail("interrupted", EXIT_FAILURE)

    sys.stdout.write(output)
    return EXIT_OK
