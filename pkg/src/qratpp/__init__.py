"""qratpp - QBF preprocessing with QRAT+ redundancy elimination."""

__version__ = "0.1.0"

from .config import Config
from .error_handler import (ConfigError, OracleGuardError, ParseError, QratppError,
                            SessionStateError)
from .formula import PCNF, Clause, FormulaStats, Prefix, Quantifier, compute_stats, reduction_report
from .pipeline import PreprocessOutcome, Technique, Verdict, run_pipeline
from .qdimacs import parse_qdimacs, write_qdimacs
from .redundancy import CheckMode
from .session import (Session, api_configure, api_export, api_import, api_preprocess,
                      api_stats)

__all__ = [
    "__version__",
    "CheckMode",
    "Clause",
    "Config",
    "ConfigError",
    "FormulaStats",
    "OracleGuardError",
    "ParseError",
    "PCNF",
    "Prefix",
    "PreprocessOutcome",
    "QratppError",
    "Quantifier",
    "Session",
    "SessionStateError",
    "Technique",
    "Verdict",
    "api_configure",
    "api_export",
    "api_import",
    "api_preprocess",
    "api_stats",
    "compute_stats",
    "parse_qdimacs",
    "reduction_report",
    "run_pipeline",
    "write_qdimacs",
]
