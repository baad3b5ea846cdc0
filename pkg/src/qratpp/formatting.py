"""Report formatting for the command-line front ends."""

import json
from typing import Any, Dict, Optional

from rich.table import Table

from .formula import FormulaStats, ReductionReport
from .pipeline import PASS_ORDER, PipelineCounters, PreprocessOutcome, Verdict

TRIVIALLY_FALSE = "p cnf 0 1\n0\n"


class OutputFormatter:
    """Renders formulas, statistics and harness reports."""

    @staticmethod
    def format_outcome_header(outcome: PreprocessOutcome) -> str:
        """Comment lines placed in front of the emitted formula."""
        lines = []
        if outcome.counters.timed_out:
            lines.append("c timed out")
        if outcome.verdict is Verdict.SOLVED_SAT:
            lines.append("c solved: SAT")
        elif outcome.verdict is Verdict.SOLVED_UNSAT:
            lines.append("c solved: UNSAT")
        return "".join(line + "\n" for line in lines)

    @staticmethod
    def format_stats_table(before: FormulaStats, after: FormulaStats,
                           report: ReductionReport) -> Table:
        table = Table(title="Formula size", show_header=True, header_style="bold")
        table.add_column("metric")
        table.add_column("before", justify="right")
        table.add_column("after", justify="right")
        table.add_column("%", justify="right")
        rows = (
            ("#cl", before.clause_count, after.clause_count),
            ("#qb", before.qblock_count, after.qblock_count),
            ("#el", before.existential_literal_occurrences, after.existential_literal_occurrences),
            ("#ul", before.universal_literal_occurrences, after.universal_literal_occurrences),
        )
        percents = report.as_dict()
        for name, old, new in rows:
            table.add_row(name, str(old), str(new), str(percents[name]))
        return table

    @staticmethod
    def format_counters(counters: PipelineCounters) -> Table:
        table = Table(title="Pipeline", show_header=False)
        table.add_column("counter")
        table.add_column("value", justify="right")
        table.add_row("rounds", str(counters.rounds))
        table.add_row("checks", str(counters.checks_performed))
        table.add_row("checks per clause", f"{counters.checks_per_clause:.2f}")
        table.add_row("clauses removed", str(counters.clauses_removed))
        table.add_row("universal literals removed", str(counters.universal_literals_removed))
        for technique in PASS_ORDER:
            table.add_row(f"  by {technique.label}", str(counters.removed_by[technique.value]))
        if counters.timed_out:
            table.add_row("timed out", "yes")
        return table

    @staticmethod
    def format_json_line(kind: str, payload: Optional[Dict[str, Any]] = None) -> str:
        record: Dict[str, Any] = {"kind": kind}
        if payload:
            record.update(payload)
        return json.dumps(record, sort_keys=True)
