"""Command-line front ends: the preprocessor and the oracle harness."""

import logging
import sys
from typing import Optional, Sequence

import click
from rich.console import Console
from rich.logging import RichHandler

from . import __version__
from .config import Config
from .error_handler import EXIT_ERROR, handle_errors
from .formatting import TRIVIALLY_FALSE, OutputFormatter
from .formula import compute_stats
from .oracle import (CorpusSpec, all_violations, check_saturation, check_truth_preserving,
                     differential_checks, scheduling_equivalence)
from .pipeline import Verdict
from .qdimacs import parse_qdimacs
from .session import Session

logger = logging.getLogger(__name__)

console = Console(stderr=True)

EXIT_CODES = {
    Verdict.SIMPLIFIED: 0,
    Verdict.SOLVED_SAT: 10,
    Verdict.SOLVED_UNSAT: 20,
}


def _setup_logging(verbose: bool) -> None:
    package_logger = logging.getLogger("qratpp")
    package_logger.handlers = [RichHandler(console=console, show_path=False)]
    package_logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _read_input(input_path: Optional[str]) -> str:
    if input_path is None or input_path == "-":
        return click.get_text_stream("stdin").read()
    with open(input_path, "r", encoding="utf-8") as f:
        return f.read()


@click.command()
@click.argument("input_path", required=False, type=click.Path(dir_okay=False, allow_dash=True))
@click.option("--no-qbce", is_flag=True, help="Disable quantified blocked clause elimination")
@click.option("--no-qat", is_flag=True, help="Disable clause-level QAT elimination")
@click.option("--no-qrate", is_flag=True, help="Disable QRATE+ clause elimination")
@click.option("--no-ble", is_flag=True, help="Disable blocked literal elimination")
@click.option("--no-qratu", is_flag=True, help="Disable QRATU+ literal elimination")
@click.option("--qrat", "classic", is_flag=True,
              help="Use classic QRAT checks (full abstraction, no universal reduction)")
@click.option("--seed", help="Shuffle clause order with this 64-bit seed")
@click.option("--soft-time-limit",
              help="Stop after this many seconds and print the current formula")
@click.option("--max-rounds", help="Limit the number of outer rounds")
@click.option("--schedule-everything", is_flag=True,
              help="Recheck every clause in every sweep instead of witness scheduling")
@click.option("--lax", is_flag=True, help="Accept variables above the preamble bound")
@click.option("--stats", is_flag=True, help="Print statistics and the reduction report to stderr")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              help="Write the formula here instead of standard output")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Load options from a YAML file (flags take precedence)")
@click.option("--show-config", is_flag=True, help="Show the effective configuration and exit")
@click.option("--verbose", "-v", is_flag=True, help="Log pipeline progress to stderr")
@click.option("--debug", is_flag=True, help="Show tracebacks for unexpected errors")
@click.version_option(__version__, prog_name="qratpp")
@handle_errors
def main(input_path, no_qbce, no_qat, no_qrate, no_ble, no_qratu, classic, seed,
         soft_time_limit, max_rounds, schedule_everything, lax, stats, out_path,
         config_path, show_config, verbose, debug):
    """qratpp - QBF preprocessing with QRAT+ redundancy elimination.

    Reads a QDIMACS formula from INPUT_PATH (or standard input) and writes the
    simplified formula. Exit codes: 0 simplified, 10 solved true, 20 solved
    false, 1 error.

    Examples:
        qratpp formula.qdimacs                  # all techniques until saturation
        qratpp --qrat formula.qdimacs           # classic QRAT checks
        qratpp --seed 7 --soft-time-limit 60 f  # shuffled, time limited
        cat f.qdimacs | qratpp --stats          # report sizes on stderr
    """
    _setup_logging(verbose)

    config = Config.from_file(config_path) if config_path else Config()
    overrides = {
        "qbce": False if no_qbce else None,
        "qat": False if no_qat else None,
        "qrate": False if no_qrate else None,
        "ble": False if no_ble else None,
        "qratu": False if no_qratu else None,
        "mode": "qrat" if classic else None,
        "seed": seed,
        "soft_time_limit": soft_time_limit,
        "max_outer_rounds": max_rounds,
        "schedule_everything": True if schedule_everything else None,
        "strict": False if lax else None,
    }
    config.update({k: v for k, v in overrides.items() if v is not None})

    if show_config:
        click.echo(config.show_config(), nl=False)
        return 0

    formula = parse_qdimacs(_read_input(input_path), strict=config.strict)
    session = Session(config)
    session.import_formula(formula)
    before = compute_stats(formula)
    outcome = session.preprocess()

    if outcome.verdict is Verdict.SOLVED_UNSAT:
        body = TRIVIALLY_FALSE
    else:
        body = session.export()
    text = OutputFormatter.format_outcome_header(outcome) + body

    if out_path:
        with open(out_path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)

    if stats:
        summary = session.stats()
        console.print(OutputFormatter.format_stats_table(before, summary.stats, summary.report))
        console.print(OutputFormatter.format_counters(outcome.counters))
    for message in session.diagnostics:
        logger.info(message)

    return EXIT_CODES[outcome.verdict]


@click.command()
@click.option("--count", default=100, show_default=True, help="Number of random formulas")
@click.option("--seed", default=0, show_default=True, help="Corpus seed")
@click.option("--max-vars", default=8, show_default=True)
@click.option("--max-blocks", default=3, show_default=True)
@click.option("--max-clauses", default=16, show_default=True)
@click.option("--max-clause-len", default=4, show_default=True)
@click.option("--episodes", default=20, show_default=True,
              help="Propagation episodes per formula")
@click.option("--qrat", "classic", is_flag=True, help="Run the pipeline with classic QRAT checks")
@click.option("--shuffle-seed", type=int, help="Shuffle clause order in pipeline runs")
@click.option("--verbose", "-v", is_flag=True, help="Log harness progress to stderr")
@click.option("--debug", is_flag=True, help="Show tracebacks for unexpected errors")
@handle_errors
def oracle_main(count, seed, max_vars, max_blocks, max_clauses, max_clause_len, episodes,
                classic, shuffle_seed, verbose, debug):
    """Check the preprocessor against brute-force evaluation.

    Prints one JSON line per violation followed by a summary line; exits 0
    when nothing was found and 1 otherwise.
    """
    _setup_logging(verbose)
    spec = CorpusSpec(max_vars=max_vars, max_blocks=max_blocks, max_clauses=max_clauses,
                      max_clause_len=max_clause_len, count=count, seed=seed)
    config = Config()
    config.update({"mode": "qrat" if classic else "qrat+", "seed": shuffle_seed})

    truth = check_truth_preserving(spec, config)
    saturation = check_saturation(spec, config)
    scheduling = scheduling_equivalence(spec, config)
    differential = differential_checks(spec, episodes_per_formula=episodes)
    violations = all_violations(
        [truth, saturation, scheduling.violations, differential.violations])

    for violation in violations:
        click.echo(OutputFormatter.format_json_line("violation", violation.as_dict()))
    click.echo(OutputFormatter.format_json_line("summary", {
        "instances": scheduling.instances,
        "checks": differential.checks,
        "episodes": differential.episodes,
        "separations": differential.separations,
        "separation_example": differential.separation_example,
        "scheduled_checks": scheduling.scheduled_checks,
        "everything_checks": scheduling.everything_checks,
        "fewer_checks": scheduling.fewer_checks,
        "violations": len(violations),
    }))
    return 0 if not violations else EXIT_ERROR


def _invoke(command: click.Command, argv: Optional[Sequence[str]], prog_name: str) -> int:
    args = list(argv) if argv is not None else sys.argv[1:]
    try:
        result = command.main(args=args, prog_name=prog_name, standalone_mode=False)
    except click.ClickException as e:
        e.show(file=sys.stderr)
        return EXIT_ERROR
    except click.Abort:
        console.print("[yellow]Aborted[/yellow]")
        return EXIT_ERROR
    return result if isinstance(result, int) else 0


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the preprocessor command and return its exit code."""
    return _invoke(main, argv, "qratpp")


def oracle_cli_main(argv: Optional[Sequence[str]] = None) -> int:
    return _invoke(oracle_main, argv, "qratpp-oracle")


def run() -> None:
    sys.exit(cli_main())


def oracle_run() -> None:
    sys.exit(oracle_cli_main())


if __name__ == "__main__":
    run()
