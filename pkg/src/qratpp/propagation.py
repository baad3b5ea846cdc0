"""QBF unit propagation (QBCP) with universal reduction.

The abstraction index ``i`` is never materialized: a variable counts as
existential when its quantifier is existential or its level is at most
``i`` (``i = n`` treats every variable as existential).

``PropagationEngine`` uses two-literal watching. Outside of a propagation
episode every clause with at least two literals that are existential in the
input prefix watches two such literals; clauses with fewer are kept in a
scan list and evaluated at the start of every episode. During an episode
watchers may move to any literal that is existential under ``i``; they are
restored when the episode's assignment is retracted.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Deque, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .formula import Clause, Literal, Prefix, Quantifier, Variable

logger = logging.getLogger(__name__)


class PropagationMode(Enum):
    """Unit propagation with or without universal reduction."""
    WITH_UR = "with-ur"
    PLAIN_UP = "plain-up"


@dataclass(frozen=True)
class PropagationOutcome:
    """Either a conflict or the stable closure of forced literals."""
    conflict: bool
    trail: Tuple[Literal, ...] = ()

    @classmethod
    def make_conflict(cls, trail: Iterable[Literal] = ()) -> "PropagationOutcome":
        return cls(True, tuple(trail))

    @classmethod
    def make_stable(cls, trail: Iterable[Literal]) -> "PropagationOutcome":
        return cls(False, tuple(trail))

    @property
    def closure(self) -> FrozenSet[Literal]:
        return frozenset(self.trail)

    def __str__(self) -> str:
        if self.conflict:
            return "Conflict"
        return f"Stable({' '.join(map(str, self.trail))})"


class Assignment:
    """Trail of assigned literals with per-variable values."""

    def __init__(self):
        self.trail: List[Literal] = []
        self._values: Dict[int, bool] = {}

    def __len__(self) -> int:
        return len(self.trail)

    def value(self, lit: Literal) -> Optional[bool]:
        val = self._values.get(abs(lit))
        if val is None:
            return None
        return val if lit > 0 else not val

    def is_true(self, lit: Literal) -> bool:
        return self._values.get(abs(lit)) is (lit > 0)

    def is_false(self, lit: Literal) -> bool:
        return self._values.get(abs(lit)) is (lit < 0)

    def assign(self, lit: Literal) -> None:
        self._values[abs(lit)] = lit > 0
        self.trail.append(lit)

    def clear(self) -> None:
        self.trail.clear()
        self._values.clear()


def is_existential_under(var: Variable, i: int) -> bool:
    return var.quant is Quantifier.EXISTENTIAL or var.level <= i


def universal_reducible(lit: Literal, clause: Iterable[Literal], prefix: Prefix, i: int,
                        assignment: Optional[Assignment] = None) -> bool:
    """Whether ``lit`` can be reduced from the unfalsified part of ``clause``.

    True iff the literal is universal under ``i`` and no unfalsified literal
    of the clause that is existential under ``i`` sits at a deeper level.
    """
    var = prefix.variable(abs(lit))
    if is_existential_under(var, i):
        return False
    for other in clause:
        if assignment is not None and assignment.is_false(other):
            continue
        other_var = prefix.variable(abs(other))
        if other_var.level > var.level and is_existential_under(other_var, i):
            return False
    return True


class _Status(Enum):
    SATISFIED = 1
    CONFLICT = 2
    UNIT = 3
    OPEN = 4


def _evaluate(lits: Iterable[Literal], prefix: Prefix, assignment: Assignment,
              i: int, mode: PropagationMode) -> Tuple[_Status, Optional[Literal]]:
    existential: List[Literal] = []
    universal: List[Literal] = []
    for lit in lits:
        val = assignment.value(lit)
        if val is True:
            return _Status.SATISFIED, None
        if val is False:
            continue
        if is_existential_under(prefix.variable(abs(lit)), i):
            existential.append(lit)
        else:
            universal.append(lit)
    if mode is PropagationMode.WITH_UR and universal:
        deepest = max((prefix.level(e) for e in existential), default=0)
        universal = [u for u in universal if prefix.level(u) < deepest]
    remaining = len(existential) + len(universal)
    if remaining == 0:
        return _Status.CONFLICT, None
    if remaining == 1 and existential:
        return _Status.UNIT, existential[0]
    return _Status.OPEN, None


def _check_index(prefix: Prefix, i: int, mode: PropagationMode) -> None:
    if not 0 <= i <= prefix.n:
        raise ValueError(f"abstraction index {i} outside [0, {prefix.n}]")
    if mode is PropagationMode.PLAIN_UP and i != prefix.n:
        raise ValueError("plain unit propagation requires the full abstraction")


def propagate_naive(clauses: Iterable[Clause], prefix: Prefix, assumptions: Iterable[Literal],
                    i: int, mode: PropagationMode) -> PropagationOutcome:
    """Reference propagator: repeated full scans until fixpoint."""
    _check_index(prefix, i, mode)
    live = sorted((c for c in clauses if c.live), key=lambda c: c.id)
    assignment = Assignment()
    for lit in assumptions:
        if assignment.is_false(lit):
            return PropagationOutcome.make_conflict(assignment.trail)
        if not assignment.is_true(lit):
            assignment.assign(lit)

    changed = True
    while changed:
        changed = False
        for clause in live:
            status, unit = _evaluate(clause.lits, prefix, assignment, i, mode)
            if status is _Status.CONFLICT:
                return PropagationOutcome.make_conflict(assignment.trail)
            if status is _Status.UNIT:
                assignment.assign(unit)
                changed = True
    return PropagationOutcome.make_stable(assignment.trail)


class PropagationEngine:
    """Watched-literal QBCP over a mutable set of clauses."""

    def __init__(self, prefix: Prefix, clauses: Iterable[Clause] = ()):
        self.prefix = prefix
        self.assignment = Assignment()
        self.episodes = 0
        self._clauses: Dict[int, Clause] = {}
        # insertion-ordered sets keep visiting order reproducible
        self._watches: Dict[Literal, Dict[int, None]] = {}
        self._watched: Dict[int, List[Literal]] = {}
        self._home: Dict[int, Tuple[Literal, Literal]] = {}
        self._scan: Dict[int, None] = {}
        self._touched: Set[int] = set()
        for clause in clauses:
            if clause.live:
                self.attach(clause)

    def __contains__(self, cid: int) -> bool:
        return cid in self._clauses

    def attach(self, clause: Clause) -> None:
        """Start propagating over ``clause``."""
        cid = clause.id
        self._clauses[cid] = clause
        home = [lit for lit in clause.lits if self.prefix.is_existential(lit)][:2]
        if len(home) == 2:
            self._home[cid] = (home[0], home[1])
            self._watched[cid] = []
            self._set_watched(cid, home)
        else:
            self._watched[cid] = []
            self._scan[cid] = None

    def detach(self, cid: int) -> None:
        """Stop propagating over clause ``cid`` (it was removed)."""
        if cid not in self._clauses:
            return
        for lit in self._watched.pop(cid):
            del self._watches[lit][cid]
        self._home.pop(cid, None)
        self._scan.pop(cid, None)
        self._touched.discard(cid)
        del self._clauses[cid]

    def refresh(self, clause: Clause) -> None:
        """Recompute watchers after literals were removed from ``clause``."""
        self.detach(clause.id)
        self.attach(clause)

    def _set_watched(self, cid: int, lits: List[Literal]) -> None:
        for lit in self._watched[cid]:
            del self._watches[lit][cid]
        for lit in lits:
            self._watches.setdefault(lit, {})[cid] = None
        self._watched[cid] = list(lits)

    def _move_watch(self, cid: int, old: Literal, new: Literal) -> None:
        watched = self._watched[cid]
        watched[watched.index(old)] = new
        del self._watches[old][cid]
        self._watches.setdefault(new, {})[cid] = None
        self._touched.add(cid)

    def propagate(self, assumptions: Iterable[Literal], i: int, mode: PropagationMode,
                  exclude: Iterable[int] = ()) -> PropagationOutcome:
        """Run one propagation episode and retract it afterwards.

        Clauses whose ids are in ``exclude`` take no part in the episode.
        """
        _check_index(self.prefix, i, mode)
        self.episodes += 1
        try:
            return self._run(assumptions, i, mode, set(exclude))
        finally:
            self._retract()

    def _run(self, assumptions: Iterable[Literal], i: int, mode: PropagationMode,
             excluded: Set[int]) -> PropagationOutcome:
        assignment = self.assignment
        queue: Deque[Literal] = deque()
        for lit in assumptions:
            if assignment.is_false(lit):
                return PropagationOutcome.make_conflict(assignment.trail)
            if not assignment.is_true(lit):
                assignment.assign(lit)
                queue.append(-lit)

        for cid in list(self._scan):
            if cid in excluded:
                continue
            if not self._visit(self._clauses[cid], i, mode, queue):
                return PropagationOutcome.make_conflict(assignment.trail)

        while queue:
            false_lit = queue.popleft()
            watchers = self._watches.get(false_lit)
            if not watchers:
                continue
            for cid in list(watchers):
                if cid in excluded:
                    continue
                if not self._on_false_watch(cid, false_lit, i, mode, queue):
                    return PropagationOutcome.make_conflict(assignment.trail)
        return PropagationOutcome.make_stable(assignment.trail)

    def _on_false_watch(self, cid: int, false_lit: Literal, i: int, mode: PropagationMode,
                        queue: Deque[Literal]) -> bool:
        assignment = self.assignment
        clause = self._clauses[cid]
        watched = self._watched[cid]
        if false_lit not in watched:
            return True
        other = next((lit for lit in watched if lit != false_lit), None)
        if other is not None and assignment.is_true(other):
            return True
        for lit in clause.lits:
            if lit == false_lit or lit == other or assignment.is_false(lit):
                continue
            if is_existential_under(self.prefix.variable(abs(lit)), i):
                self._move_watch(cid, false_lit, lit)
                return True
        return self._visit(clause, i, mode, queue)

    def _visit(self, clause: Clause, i: int, mode: PropagationMode,
               queue: Deque[Literal]) -> bool:
        """Fully evaluate a clause; returns False on conflict."""
        status, unit = _evaluate(clause.lits, self.prefix, self.assignment, i, mode)
        if status is _Status.CONFLICT:
            return False
        if status is _Status.UNIT:
            self.assignment.assign(unit)
            queue.append(-unit)
        elif status is _Status.OPEN:
            candidates = [
                lit for lit in clause.lits
                if self.assignment.value(lit) is None
                and is_existential_under(self.prefix.variable(abs(lit)), i)
            ][:2]
            if candidates != self._watched[clause.id]:
                self._set_watched(clause.id, candidates)
                self._touched.add(clause.id)
        return True

    def _retract(self) -> None:
        self.assignment.clear()
        for cid in self._touched:
            home = self._home.get(cid)
            self._set_watched(cid, list(home) if home else [])
        self._touched.clear()

    def watch_violations(self) -> List[int]:
        """Ids of clauses whose watchers break the between-episode invariant.

        Clauses with two or more input-existential literals must watch two of
        them; all other clauses must watch nothing.
        """
        bad = []
        for cid, clause in self._clauses.items():
            watched = self._watched[cid]
            existential = [lit for lit in clause.lits if self.prefix.is_existential(lit)]
            if len(existential) >= 2:
                ok = (len(watched) == 2 and len(set(watched)) == 2
                      and all(lit in existential and cid in self._watches.get(lit, {})
                              for lit in watched))
            else:
                ok = not watched
            if not ok:
                bad.append(cid)
        return bad


def propagate(clauses: Iterable[Clause], prefix: Prefix, assumptions: Iterable[Literal],
              i: int, mode: PropagationMode) -> PropagationOutcome:
    """One-shot watched propagation over ``clauses``."""
    return PropagationEngine(prefix, clauses).propagate(assumptions, i, mode)
