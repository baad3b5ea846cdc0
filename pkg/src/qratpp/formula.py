"""PCNF data model: quantifier prefix, clause matrix and formula statistics.

Literals are signed variable ids in the QDIMACS convention (``3`` / ``-3``).
Variables keep their external QDIMACS numbers; nesting levels are the
1-based positions of their blocks in the normalized prefix.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

logger = logging.getLogger(__name__)

Literal = int


class Quantifier(Enum):
    """Quantifier of a block, valued by its QDIMACS letter."""
    EXISTENTIAL = "e"
    UNIVERSAL = "a"


@dataclass(frozen=True)
class Variable:
    """A bound variable with its nesting level and quantifier."""
    id: int
    level: int
    quant: Quantifier

    @property
    def is_existential(self) -> bool:
        return self.quant is Quantifier.EXISTENTIAL


def var_of(lit: Literal) -> int:
    return abs(lit)


def complement(lit: Literal) -> Literal:
    return -lit


def is_tautological(lits: Iterable[Literal]) -> bool:
    """True iff the literal set contains a complementary pair."""
    seen = set(lits)
    return any(-lit in seen for lit in seen)


@dataclass(frozen=True)
class QuantBlock:
    """One quantifier block: a quantifier and its variables in input order."""
    quant: Quantifier
    variables: Tuple[int, ...]


BlockSpec = Union[QuantBlock, Tuple[Union[str, Quantifier], Iterable[int]]]


def _as_block(spec: BlockSpec) -> QuantBlock:
    if isinstance(spec, QuantBlock):
        return spec
    quant, variables = spec
    if not isinstance(quant, Quantifier):
        quant = Quantifier(quant)
    return QuantBlock(quant, tuple(variables))


class Prefix:
    """Ordered quantifier blocks; level of a block is its 1-based index."""

    def __init__(self, blocks: Iterable[BlockSpec] = ()):
        self.blocks: Tuple[QuantBlock, ...] = tuple(_as_block(b) for b in blocks)
        self._vars: Dict[int, Variable] = {}
        for level, block in enumerate(self.blocks, start=1):
            for v in block.variables:
                if v <= 0:
                    raise ValueError(f"invalid variable id {v}")
                if v in self._vars:
                    raise ValueError(f"variable {v} bound in more than one block")
                self._vars[v] = Variable(v, level, block.quant)

    @property
    def n(self) -> int:
        return len(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __contains__(self, v: int) -> bool:
        return v in self._vars

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Prefix):
            return NotImplemented
        return self.blocks == other.blocks

    def __repr__(self) -> str:
        parts = [f"{b.quant.value} {' '.join(map(str, b.variables))}" for b in self.blocks]
        return f"Prefix({'; '.join(parts)})"

    def variables(self) -> Iterator[Variable]:
        return iter(self._vars.values())

    def variable(self, v: int) -> Variable:
        return self._vars[v]

    def level(self, lit: Literal) -> int:
        return self._vars[abs(lit)].level

    def is_existential(self, lit: Literal) -> bool:
        """Quantifier in this (the input) prefix, ignoring any abstraction."""
        return self._vars[abs(lit)].quant is Quantifier.EXISTENTIAL

    def is_universal(self, lit: Literal) -> bool:
        return self._vars[abs(lit)].quant is Quantifier.UNIVERSAL

    def sort_key(self, lit: Literal) -> Tuple[int, int, bool]:
        """Canonical literal order: (level, variable id, sign)."""
        return (self._vars[abs(lit)].level, abs(lit), lit < 0)

    def sorted_lits(self, lits: Iterable[Literal]) -> List[Literal]:
        return sorted(lits, key=self.sort_key)

    def normalized(self) -> "Prefix":
        """Drop empty blocks and merge adjacent blocks of the same quantifier."""
        merged: List[Tuple[Quantifier, List[int]]] = []
        for block in self.blocks:
            if not block.variables:
                continue
            if merged and merged[-1][0] is block.quant:
                merged[-1][1].extend(block.variables)
            else:
                merged.append((block.quant, list(block.variables)))
        return Prefix(QuantBlock(q, tuple(vs)) for q, vs in merged)

    def restricted(self, keep: Set[int]) -> "Prefix":
        """Normalized prefix over the variables in ``keep`` only."""
        return Prefix(
            QuantBlock(b.quant, tuple(v for v in b.variables if v in keep))
            for b in self.blocks
        ).normalized()

    def is_normalized(self) -> bool:
        if any(not b.variables for b in self.blocks):
            return False
        return all(a.quant is not b.quant for a, b in zip(self.blocks, self.blocks[1:]))


class Clause:
    """A clause with a stable id and a liveness flag for lazy deletion."""

    __slots__ = ("id", "lits", "live")

    def __init__(self, cid: int, lits: Sequence[Literal], live: bool = True):
        self.id = cid
        self.lits: List[Literal] = list(lits)
        self.live = live

    def __len__(self) -> int:
        return len(self.lits)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.lits)

    def __contains__(self, lit: object) -> bool:
        return lit in self.lits

    def __repr__(self) -> str:
        flag = "" if self.live else " dead"
        return f"Clause({self.id}: {self}{flag})"

    def __str__(self) -> str:
        return "(" + " ".join(map(str, self.lits)) + ")"

    @property
    def is_empty(self) -> bool:
        return not self.lits

    def copy(self) -> "Clause":
        return Clause(self.id, self.lits, self.live)


class PCNF:
    """A prefix plus a clause matrix; the live clauses form the matrix."""

    FREE_VARS_OUTERMOST_EXISTENTIAL = "outermost-existential"

    def __init__(self, prefix: Prefix, clauses: Iterable[Clause],
                 free_variable_policy: str = FREE_VARS_OUTERMOST_EXISTENTIAL,
                 tautologies_dropped: int = 0):
        self.prefix = prefix
        self.clauses: List[Clause] = list(clauses)
        self.free_variable_policy = free_variable_policy
        self.tautologies_dropped = tautologies_dropped
        self._by_id: Dict[int, Clause] = {c.id: c for c in self.clauses}
        for clause in self.clauses:
            for lit in clause.lits:
                if abs(lit) not in prefix:
                    raise ValueError(f"literal {lit} of clause {clause.id} is not bound")

    @classmethod
    def from_lists(cls, blocks: Iterable[BlockSpec],
                   clauses: Iterable[Iterable[Literal]]) -> "PCNF":
        """Build a normalized PCNF from raw blocks and literal lists.

        Free variables go to an outermost existential block, duplicate
        literals are merged and tautological clauses are dropped (counted in
        ``tautologies_dropped``). Empty clauses are kept.
        """
        raw_blocks = [_as_block(b) for b in blocks]
        bound = {v for b in raw_blocks for v in b.variables}
        kept: List[List[Literal]] = []
        dropped = 0
        free: List[int] = []
        free_seen: Set[int] = set()
        for lits in clauses:
            unique = list(dict.fromkeys(lits))
            for lit in unique:
                v = abs(lit)
                if v not in bound and v not in free_seen:
                    free_seen.add(v)
                    free.append(v)
            if is_tautological(unique):
                dropped += 1
                continue
            kept.append(unique)
        if dropped:
            logger.warning(f"dropped {dropped} tautological input clause(s)")
        if free:
            raw_blocks.insert(0, QuantBlock(Quantifier.EXISTENTIAL, tuple(sorted(free))))
        prefix = Prefix(raw_blocks).normalized()
        built = [Clause(cid, prefix.sorted_lits(lits)) for cid, lits in enumerate(kept, start=1)]
        return cls(prefix, built, tautologies_dropped=dropped)

    def __repr__(self) -> str:
        return f"PCNF({self.prefix!r}, {[str(c) for c in self.live_clauses()]})"

    def clause(self, cid: int) -> Clause:
        return self._by_id[cid]

    def get(self, cid: int) -> Optional[Clause]:
        return self._by_id.get(cid)

    def live_clauses(self) -> Iterator[Clause]:
        return (c for c in self.clauses if c.live)

    def live_count(self) -> int:
        return sum(1 for c in self.clauses if c.live)

    def used_variables(self) -> Set[int]:
        return {abs(lit) for c in self.live_clauses() for lit in c.lits}

    def has_empty_clause(self) -> bool:
        return any(c.live and not c.lits for c in self.clauses)

    def tautological_clauses(self) -> List[int]:
        """Ids of live clauses containing a complementary pair (always empty)."""
        return [c.id for c in self.live_clauses() if is_tautological(c.lits)]

    def compact(self) -> int:
        """Drop dead clauses from the clause list; returns how many went."""
        before = len(self.clauses)
        self.clauses = [c for c in self.clauses if c.live]
        for cid in [cid for cid, c in self._by_id.items() if not c.live]:
            del self._by_id[cid]
        return before - len(self.clauses)

    def copy(self) -> "PCNF":
        return PCNF(self.prefix, (c.copy() for c in self.clauses),
                    self.free_variable_policy, self.tautologies_dropped)

    def canonical(self) -> Tuple[Tuple[Tuple[str, Tuple[int, ...]], ...],
                                 Tuple[Tuple[int, ...], ...]]:
        """Structural form modulo unused variables; equal iff exports are equal."""
        prefix = self.prefix.restricted(self.used_variables())
        blocks = tuple((b.quant.value, tuple(sorted(b.variables))) for b in prefix.blocks)
        clauses = tuple(tuple(prefix.sorted_lits(c.lits)) for c in self.live_clauses())
        return blocks, clauses


@dataclass(frozen=True)
class FormulaStats:
    """Size metrics over live clauses and the prefix of used variables."""
    clause_count: int = 0
    qblock_count: int = 0
    existential_literal_occurrences: int = 0
    universal_literal_occurrences: int = 0

    @property
    def literal_occurrences(self) -> int:
        return self.existential_literal_occurrences + self.universal_literal_occurrences


@dataclass(frozen=True)
class ReductionReport:
    """Per-metric size after preprocessing as a percentage of before."""
    clauses: int
    qblocks: int
    existential_literals: int
    universal_literals: int

    def as_dict(self) -> Dict[str, int]:
        return {
            "#cl": self.clauses,
            "#qb": self.qblocks,
            "#el": self.existential_literals,
            "#ul": self.universal_literals,
        }


def compute_stats(pcnf: PCNF) -> FormulaStats:
    """Count clauses, qblocks and literal occurrences of a formula."""
    clauses = 0
    existential = 0
    universal = 0
    for clause in pcnf.live_clauses():
        clauses += 1
        for lit in clause.lits:
            if pcnf.prefix.is_existential(lit):
                existential += 1
            else:
                universal += 1
    qblocks = len(pcnf.prefix.restricted(pcnf.used_variables()))
    return FormulaStats(clauses, qblocks, existential, universal)


def _percent(after: int, before: int) -> int:
    if before == 0:
        return 100
    # half-up rounding of after * 100 / before
    return (200 * after + before) // (2 * before)


def reduction_report(before: FormulaStats, after: FormulaStats) -> ReductionReport:
    return ReductionReport(
        clauses=_percent(after.clause_count, before.clause_count),
        qblocks=_percent(after.qblock_count, before.qblock_count),
        existential_literals=_percent(after.existential_literal_occurrences,
                                      before.existential_literal_occurrences),
        universal_literals=_percent(after.universal_literal_occurrences,
                                    before.universal_literal_occurrences),
    )


