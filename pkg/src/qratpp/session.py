"""Embeddable preprocessing session: import, configure, preprocess, export."""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Union

from .config import Config
from .error_handler import ConfigError, ParseError, SessionStateError
from .formula import PCNF, FormulaStats, ReductionReport, compute_stats, reduction_report
from .pipeline import PipelineCounters, PreprocessOutcome, run_pipeline
from .qdimacs import parse_qdimacs, write_qdimacs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SessionStats:
    """Current formula size, the imported size and the last run's counters."""
    stats: FormulaStats
    original: FormulaStats
    counters: Optional[PipelineCounters]

    @property
    def report(self) -> ReductionReport:
        return reduction_report(self.original, self.stats)


class Session:
    """Holds one formula and the configuration used to preprocess it."""

    def __init__(self, config: Optional[Config] = None):
        self.formula: Optional[PCNF] = None
        self.config = config if config is not None else Config()
        self.outcome: Optional[PreprocessOutcome] = None
        self.diagnostics: List[str] = []
        self._original: Optional[FormulaStats] = None

    def _note(self, message: str) -> None:
        logger.warning(message)
        self.diagnostics.append(message)

    def import_formula(self, source: Union[str, bytes, PCNF]) -> bool:
        """Replace the session formula; on a parse error nothing changes."""
        if isinstance(source, PCNF):
            formula = source.copy()
        else:
            try:
                formula = parse_qdimacs(source, strict=self.config.strict)
            except ParseError as e:
                self._note(f"import failed: {e}")
                return False
        if formula.tautologies_dropped:
            self.diagnostics.append(
                f"dropped {formula.tautologies_dropped} tautological clause(s)")
        self.formula = formula
        self.outcome = None
        self._original = compute_stats(formula)
        return True

    def configure(self, option: str, value: Any) -> bool:
        try:
            self.config.set(option, value)
        except ConfigError as e:
            self._note(str(e))
            return False
        return True

    def _require_formula(self) -> PCNF:
        if self.formula is None:
            raise SessionStateError("no formula imported")
        return self.formula

    def preprocess(self) -> PreprocessOutcome:
        """Run the pipeline; the simplified formula becomes the session formula."""
        formula = self._require_formula()
        self.outcome = run_pipeline(formula, self.config)
        self.formula = self.outcome.formula
        if self.outcome.counters.timed_out:
            self.diagnostics.append("soft time limit reached")
        return self.outcome

    def export(self) -> str:
        return write_qdimacs(self._require_formula())

    def stats(self) -> SessionStats:
        formula = self._require_formula()
        counters = self.outcome.counters if self.outcome is not None else None
        return SessionStats(compute_stats(formula), self._original or compute_stats(formula),
                            counters)


def api_import(session: Session, source: Union[str, bytes, PCNF]) -> bool:
    return session.import_formula(source)


def api_configure(session: Session, option: str, value: Any) -> bool:
    return session.configure(option, value)


def api_preprocess(session: Session) -> PreprocessOutcome:
    return session.preprocess()


def api_export(session: Session) -> str:
    return session.export()


def api_stats(session: Session) -> SessionStats:
    return session.stats()
