"""Outer resolvents and the QAT, QRAT/QRAT+, QBCE and BLE redundancy checks.

For a clause C containing literal l, the resolution neighborhood RN(C, l)
holds every live clause D containing the complement of l. The outer clause of
D keeps the literals of D (other than the complement of l) whose level is at
most the level of l. The outer resolvent joins C with the outer clause,
dropping l itself when l is universal.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional

from .formula import PCNF, Clause, Literal, Prefix, is_tautological
from .propagation import PropagationEngine, PropagationMode

logger = logging.getLogger(__name__)


class CheckMode(Enum):
    """Which redundancy property QAT checks use."""
    QRAT_PLUS = "qrat+"
    QRAT_CLASSIC = "qrat"


@dataclass(frozen=True)
class OuterResolvent:
    """A literal set, or ``lits is None`` for a tautological resolvent."""
    lits: Optional[FrozenSet[Literal]]

    @classmethod
    def of(cls, lits: Iterable[Literal]) -> "OuterResolvent":
        lits = frozenset(lits)
        if is_tautological(lits):
            return TAUTOLOGY
        return cls(lits)

    @property
    def is_tautology(self) -> bool:
        return self.lits is None

    def __str__(self) -> str:
        if self.lits is None:
            return "Tautology"
        return "(" + " ".join(map(str, sorted(self.lits, key=abs))) + ")"


TAUTOLOGY = OuterResolvent(None)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a per-literal check; failures name the first blocking neighbor."""
    holds: bool
    witness: Optional[int] = None

    @classmethod
    def fails(cls, witness: int) -> "CheckResult":
        return cls(False, witness)

    def __bool__(self) -> bool:
        return self.holds


HOLDS = CheckResult(True)


class OccurrenceIndex:
    """Map from literal to the live clauses containing it."""

    def __init__(self, clauses: Iterable[Clause] = ()):
        self._occurs: Dict[Literal, Dict[int, None]] = {}
        for clause in clauses:
            if clause.live:
                self.add_clause(clause)

    def add_clause(self, clause: Clause) -> None:
        for lit in clause.lits:
            self._occurs.setdefault(lit, {})[clause.id] = None

    def remove_clause(self, clause: Clause) -> None:
        for lit in clause.lits:
            self._occurs.get(lit, {}).pop(clause.id, None)

    def remove_literal(self, clause: Clause, lit: Literal) -> None:
        self._occurs.get(lit, {}).pop(clause.id, None)

    def containing(self, lit: Literal) -> List[int]:
        return sorted(self._occurs.get(lit, ()))


def resolution_neighborhood(clauses: Iterable[Clause], lit: Literal) -> List[int]:
    """Ids of live clauses containing the complement of ``lit``, ascending."""
    return sorted(c.id for c in clauses if c.live and -lit in c.lits)


def outer_clause(prefix: Prefix, d: Iterable[Literal], lit: Literal) -> FrozenSet[Literal]:
    level = prefix.level(lit)
    return frozenset(k for k in d if k != -lit and prefix.level(k) <= level)


def outer_resolvent(prefix: Prefix, c: Iterable[Literal], d: Iterable[Literal],
                    lit: Literal) -> OuterResolvent:
    lits = set(c)
    if prefix.is_universal(lit):
        lits.discard(lit)
    lits |= outer_clause(prefix, d, lit)
    return OuterResolvent.of(lits)


class RedundancyChecker:
    """Runs redundancy checks against the live clauses of one formula.

    The propagation engine and occurrence index must track the same live
    clauses as ``pcnf``; the pipeline keeps them in sync.
    """

    def __init__(self, pcnf: PCNF, engine: Optional[PropagationEngine] = None,
                 occurrences: Optional[OccurrenceIndex] = None):
        self.pcnf = pcnf
        self.prefix = pcnf.prefix
        self.engine = engine if engine is not None else PropagationEngine(
            pcnf.prefix, pcnf.live_clauses())
        self.occurrences = occurrences if occurrences is not None else OccurrenceIndex(
            pcnf.live_clauses())

    def neighborhood(self, lit: Literal) -> List[int]:
        return self.occurrences.containing(-lit)

    def check_or_qat(self, orv: OuterResolvent, mode: CheckMode,
                     exclude: Iterable[int] = ()) -> bool:
        """Whether the negated literal set propagates to a conflict.

        QRAT+ propagates with universal reduction on the abstraction at the
        deepest level of the set; classic QRAT uses the full abstraction and
        plain unit propagation.
        """
        if orv.is_tautology:
            return True
        lits = self.prefix.sorted_lits(orv.lits)
        if mode is CheckMode.QRAT_PLUS:
            i = max((self.prefix.level(lit) for lit in lits), default=0)
            pmode = PropagationMode.WITH_UR
        else:
            i = self.prefix.n
            pmode = PropagationMode.PLAIN_UP
        outcome = self.engine.propagate([-lit for lit in lits], i, pmode, exclude)
        return outcome.conflict

    def check_qat_clause(self, clause: Clause, mode: CheckMode) -> bool:
        return self.check_or_qat(OuterResolvent.of(clause.lits), mode, exclude=(clause.id,))

    def check_qrat(self, clause: Clause, lit: Literal, mode: CheckMode) -> CheckResult:
        """Whether every outer resolvent of ``clause`` on ``lit`` is QAT."""
        for did in self.neighborhood(lit):
            orv = outer_resolvent(self.prefix, clause.lits, self.pcnf.clause(did).lits, lit)
            if not self.check_or_qat(orv, mode, exclude=(clause.id,)):
                logger.debug(f"QRAT on {lit} of {clause} fails at clause {did}")
                return CheckResult.fails(did)
        return HOLDS

    def qbce_blocked(self, clause: Clause, lit: Literal) -> CheckResult:
        if not self.prefix.is_existential(lit):
            raise ValueError(f"QBCE needs an existential literal, got {lit}")
        return self._blocked(clause, lit)

    def ble_blocked(self, clause: Clause, lit: Literal) -> CheckResult:
        if not self.prefix.is_universal(lit):
            raise ValueError(f"BLE needs a universal literal, got {lit}")
        return self._blocked(clause, lit)

    def _blocked(self, clause: Clause, lit: Literal) -> CheckResult:
        """Every outer resolvent on ``lit`` is a syntactic tautology."""
        for did in self.neighborhood(lit):
            orv = outer_resolvent(self.prefix, clause.lits, self.pcnf.clause(did).lits, lit)
            if not orv.is_tautology:
                return CheckResult.fails(did)
        return HOLDS
