"""The preprocessing fixpoint loop.

Every outer round runs the enabled passes in the order QBCE, QAT, QRATE+,
BLE, QRATU+ and the loop stops once a round changes nothing. Removed clauses
are marked dead at once and compacted at the end of each sweep; universal
literals are removed from their clause immediately.

A clause is only rechecked by a technique when the check could now succeed:
it has not been checked by that technique yet, a universal literal was
removed somewhere since its last check, or a witness that blocked one of its
checks has been removed since. Skipped checks are therefore exactly those
that would fail again, and ``Config.schedule_everything`` (which checks every
live clause in every sweep) yields the same formula.
"""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .config import Config
from .formula import PCNF, Clause, Literal
from .propagation import PropagationEngine
from .redundancy import CheckResult, OccurrenceIndex, RedundancyChecker
from .shuffle import shuffle_order

logger = logging.getLogger(__name__)


class Technique(Enum):
    """Rewrite rules, valued by their configuration option name."""
    QBCE = "qbce"
    QAT = "qat"
    QRATE = "qrate"
    BLE = "ble"
    QRATU = "qratu"

    @property
    def eliminates_literals(self) -> bool:
        return self in (Technique.BLE, Technique.QRATU)

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    Technique.QBCE: "QBCE",
    Technique.QAT: "QAT",
    Technique.QRATE: "QRATE+",
    Technique.BLE: "BLE",
    Technique.QRATU: "QRATU+",
}

PASS_ORDER: Tuple[Technique, ...] = (
    Technique.QBCE, Technique.QAT, Technique.QRATE, Technique.BLE, Technique.QRATU,
)

# these run to a local fixpoint inside their pass
_LOCAL_FIXPOINT = {Technique.QBCE, Technique.BLE}


class Verdict(Enum):
    SOLVED_SAT = "sat"
    SOLVED_UNSAT = "unsat"
    SIMPLIFIED = "simplified"


@dataclass
class PipelineCounters:
    """Work and effect counters of one pipeline run."""
    checks_performed: int = 0
    clauses_removed: int = 0
    universal_literals_removed: int = 0
    rounds: int = 0
    timed_out: bool = False
    initial_clauses: int = 0
    removed_by: Dict[str, int] = field(
        default_factory=lambda: {t.value: 0 for t in PASS_ORDER})

    @property
    def checks_per_clause(self) -> float:
        if not self.initial_clauses:
            return 0.0
        return self.checks_performed / self.initial_clauses

    def as_dict(self) -> Dict[str, object]:
        return {
            "checks_performed": self.checks_performed,
            "clauses_removed": self.clauses_removed,
            "universal_literals_removed": self.universal_literals_removed,
            "rounds": self.rounds,
            "timed_out": self.timed_out,
            "removed_by": dict(self.removed_by),
        }


@dataclass
class PreprocessOutcome:
    verdict: Verdict
    formula: PCNF
    counters: PipelineCounters

    @property
    def solved(self) -> bool:
        return self.verdict is not Verdict.SIMPLIFIED


@dataclass
class WitnessIndex:
    """Clauses that made a check fail, and the clauses they blocked."""
    witness_set: Set[int] = field(default_factory=set)
    pending: Dict[int, Set[int]] = field(default_factory=dict)

    def mark(self, witness: int, blocked: int) -> None:
        self.witness_set.add(witness)
        self.pending.setdefault(witness, set()).add(blocked)

    def consume(self, witness: int) -> Tuple[bool, Set[int]]:
        """Clear the mark of ``witness``; returns (was marked, blocked ids)."""
        marked = witness in self.witness_set
        self.witness_set.discard(witness)
        return marked, self.pending.pop(witness, set())


def detect_solved(pcnf: PCNF) -> Optional[Verdict]:
    """SOLVED_UNSAT on a live empty clause, SOLVED_SAT on no live clauses."""
    if pcnf.has_empty_clause():
        return Verdict.SOLVED_UNSAT
    if pcnf.live_count() == 0:
        return Verdict.SOLVED_SAT
    return None


class PipelineState:
    """Mutable state of one run over a private working copy of the formula."""

    def __init__(self, pcnf: PCNF, config: Config):
        self.pcnf = pcnf
        self.config = config
        self.engine = PropagationEngine(pcnf.prefix, pcnf.live_clauses())
        self.occurrences = OccurrenceIndex(pcnf.live_clauses())
        self.checker = RedundancyChecker(pcnf, self.engine, self.occurrences)
        self.witnesses = WitnessIndex()
        self.counters = PipelineCounters(initial_clauses=pcnf.live_count())
        self.deadline: Optional[float] = None
        if config.soft_time_limit is not None:
            self.deadline = time.monotonic() + config.soft_time_limit
        self.verdict: Optional[Verdict] = None
        self.order: List[int] = [c.id for c in pcnf.live_clauses()]

        # logical clock for scheduling
        self.tick = 0
        self.literal_tick = 0
        self.reopened: Dict[int, int] = {}
        self.last_checked: Dict[Technique, Dict[int, int]] = {t: {} for t in PASS_ORDER}

    @property
    def stopped(self) -> bool:
        return self.counters.timed_out or self.verdict is Verdict.SOLVED_UNSAT

    def _next_tick(self) -> int:
        self.tick += 1
        return self.tick

    def is_due(self, technique: Technique, cid: int) -> bool:
        if self.config.schedule_everything:
            return True
        last = self.last_checked[technique].get(cid)
        if last is None:
            return True
        return last < self.literal_tick or last < self.reopened.get(cid, 0)

    def _begin_check(self, technique: Technique, cid: int) -> bool:
        """Record a check of ``cid``; False once the soft deadline has passed."""
        if self.deadline is not None and time.monotonic() >= self.deadline:
            if not self.counters.timed_out:
                logger.info("soft time limit reached")
            self.counters.timed_out = True
            return False
        self.last_checked[technique][cid] = self._next_tick()
        self.counters.checks_performed += 1
        return True

    def on_clause_removed(self, clause: Clause) -> Set[int]:
        """Live clauses whose failed checks may now succeed.

        A removed witness reopens every live clause of its resolution
        neighborhoods plus the clauses it was recorded against.
        """
        marked, blocked = self.witnesses.consume(clause.id)
        ids = set(blocked)
        if marked:
            for lit in clause.lits:
                ids.update(self.occurrences.containing(-lit))
        ids.discard(clause.id)
        live = set()
        for cid in ids:
            other = self.pcnf.get(cid)
            if other is not None and other.live:
                live.add(cid)
        return live

    def remove_clause(self, clause: Clause, technique: Technique) -> None:
        clause.live = False
        self.occurrences.remove_clause(clause)
        self.engine.detach(clause.id)
        self.counters.clauses_removed += 1
        self.counters.removed_by[technique.value] += 1
        logger.debug(f"{technique.label} removes clause {clause.id} {clause}")
        tick = self._next_tick()
        for cid in self.on_clause_removed(clause):
            self.reopened[cid] = tick

    def remove_literal(self, clause: Clause, lit: Literal, technique: Technique) -> None:
        clause.lits.remove(lit)
        self.occurrences.remove_literal(clause, lit)
        self.engine.refresh(clause)
        self.counters.universal_literals_removed += 1
        self.counters.removed_by[technique.value] += 1
        self.literal_tick = self._next_tick()
        logger.debug(f"{technique.label} removes literal {lit} from clause {clause.id}")
        if clause.is_empty:
            logger.info(f"clause {clause.id} became empty, formula is false")
            self.verdict = Verdict.SOLVED_UNSAT

    def _live_in_order(self) -> Iterable[Clause]:
        for cid in self.order:
            clause = self.pcnf.get(cid)
            if clause is not None and clause.live:
                yield clause

    def _record_failure(self, clause: Clause, result: CheckResult) -> None:
        if result.witness is not None:
            self.witnesses.mark(result.witness, clause.id)

    def _clause_redundant(self, clause: Clause, technique: Technique) -> bool:
        checker = self.checker
        mode = self.config.mode
        if technique is Technique.QAT:
            return checker.check_qat_clause(clause, mode)
        prefix = self.pcnf.prefix
        for lit in list(clause.lits):
            if not prefix.is_existential(lit):
                continue
            if technique is Technique.QBCE:
                result = checker.qbce_blocked(clause, lit)
            else:
                result = checker.check_qrat(clause, lit, mode)
            if result:
                return True
            self._record_failure(clause, result)
        return False

    def _sweep_clauses(self, technique: Technique) -> bool:
        removed = False
        for clause in self._live_in_order():
            if not self.is_due(technique, clause.id):
                continue
            if not self._begin_check(technique, clause.id):
                break
            if self._clause_redundant(clause, technique):
                self.remove_clause(clause, technique)
                removed = True
        self.pcnf.compact()
        return removed

    def _sweep_literals(self, technique: Technique) -> bool:
        removed = False
        prefix = self.pcnf.prefix
        checker = self.checker
        for clause in self._live_in_order():
            if not self.is_due(technique, clause.id):
                continue
            universals = [lit for lit in clause.lits if prefix.is_universal(lit)]
            if not universals:
                continue
            if not self._begin_check(technique, clause.id):
                break
            for lit in universals:
                if technique is Technique.BLE:
                    result = checker.ble_blocked(clause, lit)
                else:
                    result = checker.check_qrat(clause, lit, self.config.mode)
                if result:
                    removed = True
                    self.remove_literal(clause, lit, technique)
                else:
                    self._record_failure(clause, result)
            if self.stopped:
                break
        return removed

    def pass_clause_elimination(self, technique: Technique) -> bool:
        """One QBCE, QAT or QRATE+ pass; returns whether a clause was removed."""
        changed = False
        while not self.stopped and self._sweep_clauses(technique):
            changed = True
            if technique not in _LOCAL_FIXPOINT:
                break
        return changed

    def pass_literal_elimination(self, technique: Technique) -> bool:
        """One BLE or QRATU+ pass; returns whether a literal was removed.

        A clause losing its last literal ends the pass with SOLVED_UNSAT.
        """
        changed = False
        while not self.stopped and self._sweep_literals(technique):
            changed = True
            if technique not in _LOCAL_FIXPOINT:
                break
        return changed

    def run_pass(self, technique: Technique) -> bool:
        if technique.eliminates_literals:
            return self.pass_literal_elimination(technique)
        return self.pass_clause_elimination(technique)

    def run(self) -> PreprocessOutcome:
        config = self.config
        techniques = [t for t in PASS_ORDER if getattr(config, t.value)]
        self.verdict = detect_solved(self.pcnf)
        while self.verdict is None and not self.counters.timed_out:
            if config.max_outer_rounds is not None and \
                    self.counters.rounds >= config.max_outer_rounds:
                break
            self.counters.rounds += 1
            live_ids = [c.id for c in self.pcnf.live_clauses()]
            self.order = shuffle_order(live_ids, config.seed, self.counters.rounds)
            changed = False
            for technique in techniques:
                if self.run_pass(technique):
                    changed = True
                if self.stopped:
                    break
            logger.info(
                f"round {self.counters.rounds}: {self.pcnf.live_count()} clauses live, "
                f"{self.counters.checks_performed} checks so far")
            if self.verdict is None:
                self.verdict = detect_solved(self.pcnf)
            if not changed:
                break
        self.pcnf.compact()
        verdict = self.verdict or detect_solved(self.pcnf) or Verdict.SIMPLIFIED
        return PreprocessOutcome(verdict, self.pcnf, self.counters)


def run_pipeline(pcnf: PCNF, config: Optional[Config] = None) -> PreprocessOutcome:
    """Simplify a copy of ``pcnf``; the input formula is left untouched."""
    config = config if config is not None else Config()
    state = PipelineState(pcnf.copy(), config)
    outcome = state.run()
    logger.info(
        f"pipeline finished: {outcome.verdict.value}, "
        f"{outcome.counters.clauses_removed} clauses and "
        f"{outcome.counters.universal_literals_removed} universal literals removed")
    return outcome


def saturation_witness(pcnf: PCNF, config: Optional[Config] = None
                       ) -> Optional[Tuple[Technique, int, Optional[Literal]]]:
    """First enabled rewrite that still applies to ``pcnf``, or None.

    Rechecks every live clause and universal literal from scratch with a fresh
    checker; a saturated formula yields None.
    """
    config = config if config is not None else Config()
    checker = RedundancyChecker(pcnf)
    prefix = pcnf.prefix
    for technique in PASS_ORDER:
        if not getattr(config, technique.value):
            continue
        for clause in pcnf.live_clauses():
            if technique is Technique.QAT:
                if checker.check_qat_clause(clause, config.mode):
                    return technique, clause.id, None
                continue
            for lit in clause.lits:
                if technique is Technique.QBCE and prefix.is_existential(lit):
                    if checker.qbce_blocked(clause, lit):
                        return technique, clause.id, lit
                elif technique is Technique.QRATE and prefix.is_existential(lit):
                    if checker.check_qrat(clause, lit, config.mode):
                        return technique, clause.id, lit
                elif technique is Technique.BLE and prefix.is_universal(lit):
                    if checker.ble_blocked(clause, lit):
                        return technique, clause.id, lit
                elif technique is Technique.QRATU and prefix.is_universal(lit):
                    if checker.check_qrat(clause, lit, config.mode):
                        return technique, clause.id, lit
    return None
