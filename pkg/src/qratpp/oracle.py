"""Brute-force QBF evaluation and differential harnesses.

Everything here is ground truth for the soundness tests: formulas are small
enough that recursive expansion over the prefix decides them outright.
"""

import logging
import random
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .config import Config
from .error_handler import OracleGuardError
from .formula import PCNF, Literal, Quantifier, QuantBlock
from .pipeline import Verdict, run_pipeline, saturation_witness
from .propagation import PropagationEngine, PropagationMode, is_existential_under, propagate_naive
from .qdimacs import write_qdimacs
from .redundancy import CheckMode, RedundancyChecker

logger = logging.getLogger(__name__)

MAX_EVAL_VARS = 24
MAX_CORPUS_VARS = 12


@dataclass(frozen=True)
class CorpusSpec:
    """Shape and size of a randomly generated formula corpus."""
    max_vars: int = 8
    max_blocks: int = 3
    max_clauses: int = 16
    max_clause_len: int = 4
    count: int = 100
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.max_vars <= MAX_CORPUS_VARS:
            raise OracleGuardError(
                f"max_vars must be between 1 and {MAX_CORPUS_VARS}, got {self.max_vars}")
        if self.max_blocks < 1 or self.max_clauses < 1 or self.max_clause_len < 1:
            raise OracleGuardError("corpus bounds must be positive")
        if self.count < 0:
            raise OracleGuardError("corpus count must not be negative")


@dataclass(frozen=True)
class Violation:
    """One harness finding; ``index`` is the corpus position of the formula."""
    kind: str
    index: int
    detail: str

    def as_dict(self) -> Dict[str, object]:
        return {"violation": self.kind, "index": self.index, "detail": self.detail}


@dataclass
class DifferentialReport:
    checks: int = 0
    episodes: int = 0
    separations: int = 0
    separation_example: Optional[str] = None
    violations: List[Violation] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.violations


@dataclass
class SchedulingReport:
    instances: int = 0
    fewer_checks: int = 0
    scheduled_checks: int = 0
    everything_checks: int = 0
    violations: List[Violation] = field(default_factory=list)


def regression_formulas() -> List[PCNF]:
    """Hand-picked formulas with known preprocessing behaviour."""
    return [
        # forall x exists y. (x | y) & (-x | -y)
        PCNF.from_lists([("a", [1]), ("e", [2])], [[1, 2], [-1, -2]]),
        # exists a, b forall u. (a | b) & (b | u)
        PCNF.from_lists([("e", [1, 2]), ("a", [3])], [[1, 2], [2, 3]]),
        # exists e forall u. (e | u) & (-u | e)
        PCNF.from_lists([("e", [1]), ("a", [2])], [[1, 2], [-2, 1]]),
        # exists z forall x. (x | z) & (-x | -z)
        PCNF.from_lists([("e", [1]), ("a", [2])], [[2, 1], [-2, -1]]),
        # exists z. (z) & (-z)
        PCNF.from_lists([("e", [1])], [[1], [-1]]),
        # forall x. (x)
        PCNF.from_lists([("a", [1])], [[1]]),
    ]


def generate_formula(rng: random.Random, spec: CorpusSpec) -> PCNF:
    """One random closed PCNF without tautological clauses."""
    num_vars = rng.randint(1, spec.max_vars)
    num_blocks = rng.randint(1, min(spec.max_blocks, num_vars))
    variables = list(range(1, num_vars + 1))
    rng.shuffle(variables)
    cuts = sorted(rng.sample(range(1, num_vars), num_blocks - 1))
    quant = rng.choice([Quantifier.EXISTENTIAL, Quantifier.UNIVERSAL])
    blocks = []
    start = 0
    for end in cuts + [num_vars]:
        blocks.append(QuantBlock(quant, tuple(variables[start:end])))
        start = end
        quant = Quantifier.UNIVERSAL if quant is Quantifier.EXISTENTIAL else Quantifier.EXISTENTIAL
    clauses = []
    for _ in range(rng.randint(1, spec.max_clauses)):
        width = rng.randint(1, min(spec.max_clause_len, num_vars))
        picked = rng.sample(range(1, num_vars + 1), width)
        clauses.append([v if rng.random() < 0.5 else -v for v in picked])
    return PCNF.from_lists(blocks, clauses)


def generate_corpus(spec: CorpusSpec) -> List[PCNF]:
    rng = random.Random(spec.seed)
    return [generate_formula(rng, spec) for _ in range(spec.count)]


def _expand(order: Sequence[Tuple[int, bool]], depth: int,
            clauses: List[FrozenSet[Literal]]) -> bool:
    if any(not c for c in clauses):
        return False
    if not clauses:
        return True
    var, existential = order[depth]
    branches = []
    for lit in (var, -var):
        cofactor = [c - {-lit} for c in clauses if lit not in c]
        branches.append(_expand(order, depth + 1, cofactor))
    return any(branches) if existential else all(branches)


def eval_qbf(pcnf: PCNF) -> bool:
    """Truth value of a closed PCNF by expansion in prefix order."""
    used = pcnf.used_variables()
    if len(used) > MAX_EVAL_VARS:
        raise OracleGuardError(
            f"formula has {len(used)} variables, brute force is limited to {MAX_EVAL_VARS}")
    prefix = pcnf.prefix.restricted(used)
    order = [(v, block.quant is Quantifier.EXISTENTIAL)
             for block in prefix.blocks for v in block.variables]
    return _expand(order, 0, [frozenset(c.lits) for c in pcnf.live_clauses()])


def implied_truth(verdict: Verdict, formula: PCNF) -> bool:
    if verdict is Verdict.SOLVED_SAT:
        return True
    if verdict is Verdict.SOLVED_UNSAT:
        return False
    return eval_qbf(formula)


def _formulas(spec: CorpusSpec, with_regressions: bool) -> List[PCNF]:
    corpus = generate_corpus(spec)
    if with_regressions:
        corpus = regression_formulas() + corpus
    return corpus


def check_truth_preserving(spec: CorpusSpec, config: Optional[Config] = None,
                           with_regressions: bool = True) -> List[Violation]:
    """Run the pipeline on every corpus formula and compare truth values."""
    config = config if config is not None else Config()
    violations = []
    for index, formula in enumerate(_formulas(spec, with_regressions)):
        expected = eval_qbf(formula)
        outcome = run_pipeline(formula, config)
        got = implied_truth(outcome.verdict, outcome.formula)
        if got != expected:
            violations.append(Violation(
                "truth", index,
                f"expected {expected}, pipeline gave {outcome.verdict.value} ({got}) "
                f"on {write_qdimacs(formula)!r}"))
        tautologies = outcome.formula.tautological_clauses()
        if tautologies:
            violations.append(Violation("tautology", index, f"live tautologies {tautologies}"))
    logger.info(f"truth preservation: {len(violations)} violation(s)")
    return violations


def check_saturation(spec: CorpusSpec, config: Optional[Config] = None,
                     with_regressions: bool = True) -> List[Violation]:
    """Simplified outputs admit no further rewrite and are pipeline fixpoints."""
    config = config if config is not None else Config()
    violations = []
    for index, formula in enumerate(_formulas(spec, with_regressions)):
        outcome = run_pipeline(formula, config)
        if outcome.counters.timed_out:
            continue
        if outcome.verdict is Verdict.SIMPLIFIED:
            found = saturation_witness(outcome.formula, config)
            if found is not None:
                technique, cid, lit = found
                violations.append(Violation(
                    "saturation", index,
                    f"{technique.label} still applies to clause {cid} ({lit})"))
        first = write_qdimacs(outcome.formula)
        again = run_pipeline(outcome.formula, config)
        if write_qdimacs(again.formula) != first:
            violations.append(Violation("idempotence", index, "second run changed the formula"))
    return violations


def scheduling_equivalence(spec: CorpusSpec, config: Optional[Config] = None,
                           with_regressions: bool = True) -> SchedulingReport:
    """Compare witness scheduling against rechecking every clause every sweep."""
    config = config if config is not None else Config()
    scheduled = replace(config, schedule_everything=False)
    everything = replace(config, schedule_everything=True)
    report = SchedulingReport()
    for index, formula in enumerate(_formulas(spec, with_regressions)):
        a = run_pipeline(formula, scheduled)
        b = run_pipeline(formula, everything)
        report.instances += 1
        report.scheduled_checks += a.counters.checks_performed
        report.everything_checks += b.counters.checks_performed
        if a.counters.checks_performed < b.counters.checks_performed:
            report.fewer_checks += 1
        if a.verdict is not b.verdict or write_qdimacs(a.formula) != write_qdimacs(b.formula):
            report.violations.append(Violation("scheduling", index, "final formulas differ"))
        elif a.counters.checks_performed > b.counters.checks_performed:
            report.violations.append(Violation("scheduling", index, "scheduling added checks"))
    return report


def seed_divergence(spec: CorpusSpec, seeds: Tuple[int, int] = (1, 2),
                    config: Optional[Config] = None) -> Optional[int]:
    """Corpus index of a formula whose output depends on the shuffle seed."""
    config = config if config is not None else Config()
    for index, formula in enumerate(generate_corpus(spec)):
        outputs = {write_qdimacs(run_pipeline(formula, replace(config, seed=s)).formula)
                   for s in seeds}
        if len(outputs) > 1:
            return index
    return None


def _random_episode(rng: random.Random,
                    formula: PCNF) -> Tuple[List[Literal], int, PropagationMode]:
    prefix = formula.prefix
    mode = rng.choice([PropagationMode.WITH_UR, PropagationMode.PLAIN_UP])
    i = prefix.n if mode is PropagationMode.PLAIN_UP else rng.randint(0, prefix.n)
    variables = [v.id for v in prefix.variables()]
    picked = rng.sample(variables, rng.randint(0, min(3, len(variables))))
    return [v if rng.random() < 0.5 else -v for v in picked], i, mode


def _compare_episode(report: DifferentialReport, index: int, formula: PCNF,
                     engine: PropagationEngine, assumptions: List[Literal], i: int,
                     mode: PropagationMode) -> None:
    report.episodes += 1
    watched = engine.propagate(assumptions, i, mode)
    naive = propagate_naive(formula.clauses, formula.prefix, assumptions, i, mode)
    where = f"assumptions={assumptions} i={i} mode={mode.value}"
    if watched.conflict != naive.conflict or (
            not watched.conflict and watched.closure != naive.closure):
        report.violations.append(
            Violation("propagation", index, f"{where}: watched {watched}, naive {naive}"))
    forced = watched.closure - set(assumptions)
    for lit in forced:
        if not is_existential_under(formula.prefix.variable(abs(lit)), i):
            report.violations.append(
                Violation("universal-assigned", index, f"{where}: {lit} forced"))
    bad = engine.watch_violations()
    if bad:
        report.violations.append(Violation("watchers", index, f"{where}: clauses {bad}"))
    if mode is PropagationMode.PLAIN_UP and watched.conflict:
        if not engine.propagate(assumptions, i, PropagationMode.WITH_UR).conflict:
            report.violations.append(Violation("mode-monotonicity", index, where))


def differential_checks(spec: CorpusSpec, episodes_per_formula: int = 20,
                        with_regressions: bool = True) -> DifferentialReport:
    """Cross-check rule strength relations and the two propagators.

    For every clause and literal of every formula: classic QRAT implies
    QRAT+, QBCE implies the QRATE+ check and BLE implies the QRATU+ check.
    Random propagation episodes must agree between the watched engine and
    the naive propagator.
    """
    report = DifferentialReport()
    rng = random.Random(spec.seed ^ 0x5EED)
    for index, formula in enumerate(_formulas(spec, with_regressions)):
        checker = RedundancyChecker(formula)
        prefix = formula.prefix
        for clause in formula.live_clauses():
            plus = checker.check_qat_clause(clause, CheckMode.QRAT_PLUS)
            classic = checker.check_qat_clause(clause, CheckMode.QRAT_CLASSIC)
            report.checks += 1
            _record_strength(report, index, f"QAT on {clause}", classic, plus)
            for lit in clause.lits:
                plus = bool(checker.check_qrat(clause, lit, CheckMode.QRAT_PLUS))
                classic = bool(checker.check_qrat(clause, lit, CheckMode.QRAT_CLASSIC))
                report.checks += 1
                _record_strength(report, index, f"QRAT on {lit} of {clause}", classic, plus)
                if prefix.is_existential(lit):
                    blocked, restriction = bool(checker.qbce_blocked(clause, lit)), "QBCE"
                else:
                    blocked, restriction = bool(checker.ble_blocked(clause, lit)), "BLE"
                if blocked and not plus:
                    report.violations.append(Violation(
                        "subsumption", index,
                        f"{restriction} holds on {lit} of {clause}, QRAT+ fails"))
        engine = checker.engine
        for _ in range(episodes_per_formula):
            assumptions, i, mode = _random_episode(rng, formula)
            _compare_episode(report, index, formula, engine, assumptions, i, mode)
    logger.info(
        f"differential checks: {report.checks} checks, {report.episodes} episodes, "
        f"{report.separations} separations, {len(report.violations)} violation(s)")
    return report


def _record_strength(report: DifferentialReport, index: int, what: str,
                     classic: bool, plus: bool) -> None:
    if classic and not plus:
        report.violations.append(
            Violation("mode-strength", index, f"{what}: QRAT holds, QRAT+ fails"))
    elif plus and not classic:
        report.separations += 1
        if report.separation_example is None:
            report.separation_example = f"formula {index}: {what}"


def all_violations(reports: Iterable[Iterable[Violation]]) -> List[Violation]:
    return [v for group in reports for v in group]
