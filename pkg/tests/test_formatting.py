"""Tests for output formatting."""

import json

from rich.console import Console

from qratpp.formatting import TRIVIALLY_FALSE, OutputFormatter
from qratpp.formula import FormulaStats, reduction_report
from qratpp.pipeline import PipelineCounters, PreprocessOutcome, Verdict
from qratpp.qdimacs import parse_qdimacs


def _render(table) -> str:
    console = Console(width=100)
    with console.capture() as capture:
        console.print(table)
    return capture.get()


def _outcome(verdict, timed_out=False):
    counters = PipelineCounters(timed_out=timed_out)
    return PreprocessOutcome(verdict, parse_qdimacs("p cnf 0 0\n"), counters)


def test_outcome_headers():
    assert OutputFormatter.format_outcome_header(_outcome(Verdict.SIMPLIFIED)) == ""
    assert OutputFormatter.format_outcome_header(_outcome(Verdict.SOLVED_SAT)) == "c solved: SAT\n"
    assert OutputFormatter.format_outcome_header(
        _outcome(Verdict.SOLVED_UNSAT)) == "c solved: UNSAT\n"
    assert OutputFormatter.format_outcome_header(
        _outcome(Verdict.SIMPLIFIED, timed_out=True)) == "c timed out\n"


def test_trivially_false_formula_parses_to_empty_clause():
    assert parse_qdimacs(TRIVIALLY_FALSE).has_empty_clause()


def test_stats_table():
    before = FormulaStats(100, 4, 8, 3)
    after = FormulaStats(79, 3, 1, 2)
    text = _render(OutputFormatter.format_stats_table(before, after,
                                                      reduction_report(before, after)))
    assert "#cl" in text
    assert "79" in text
    assert "67" in text


def test_counters_table():
    counters = PipelineCounters(checks_performed=12, rounds=2, initial_clauses=4, timed_out=True)
    counters.removed_by["qratu"] = 3
    text = _render(OutputFormatter.format_counters(counters))
    assert "3.00" in text
    assert "QRATU+" in text
    assert "timed out" in text


def test_json_line():
    line = OutputFormatter.format_json_line("violation", {"index": 2, "detail": "x"})
    assert json.loads(line) == {"kind": "violation", "index": 2, "detail": "x"}
    assert OutputFormatter.format_json_line("summary") == '{"kind": "summary"}'
