"""Tests for QBCP: the watched engine and the naive reference propagator."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qratpp.formula import PCNF, Clause, Prefix, Quantifier, Variable
from qratpp.oracle import CorpusSpec, generate_corpus
from qratpp.propagation import (Assignment, PropagationEngine, PropagationMode,
                                is_existential_under, propagate, propagate_naive,
                                universal_reducible)

WITH_UR = PropagationMode.WITH_UR
PLAIN_UP = PropagationMode.PLAIN_UP


def test_is_existential_under():
    assert is_existential_under(Variable(1, 1, Quantifier.UNIVERSAL), 1)
    assert not is_existential_under(Variable(2, 2, Quantifier.UNIVERSAL), 1)
    assert is_existential_under(Variable(3, 3, Quantifier.EXISTENTIAL), 1)


def test_universal_reducible_without_deeper_existential():
    prefix = Prefix([("e", [1]), ("a", [2])])
    assert universal_reducible(2, [1, 2], prefix, 0)


def test_universal_not_reducible_below_deeper_existential():
    prefix = Prefix([("a", [1]), ("e", [2])])
    assert not universal_reducible(1, [1, 2], prefix, 0)


def test_universal_reducible_on_unfalsified_remainder():
    prefix = Prefix([("a", [1]), ("e", [2])])
    assignment = Assignment()
    assignment.assign(-2)
    assert universal_reducible(1, [1, 2], prefix, 0, assignment)
    # under i = 1 the universal counts as existential
    assert not universal_reducible(1, [1, 2], prefix, 1, assignment)


@pytest.fixture
def reduction_example():
    """exists a, b forall u. (b | u)"""
    return PCNF.from_lists([("e", [1, 2]), ("a", [3])], [[2, 3]])


@pytest.mark.parametrize("run", [propagate, propagate_naive])
def test_universal_reduction_yields_conflict(run, reduction_example):
    outcome = run(reduction_example.clauses, reduction_example.prefix, [-1, -2], 1, WITH_UR)
    assert outcome.conflict
    assert str(outcome) == "Conflict"


@pytest.mark.parametrize("run", [propagate, propagate_naive])
def test_plain_unit_propagation_assigns_universal(run, reduction_example):
    outcome = run(reduction_example.clauses, reduction_example.prefix, [-1, -2], 2, PLAIN_UP)
    assert not outcome.conflict
    assert outcome.closure == {-1, -2, 3}


@pytest.mark.parametrize("run", [propagate, propagate_naive])
def test_nothing_to_propagate(run):
    prefix = Prefix([("e", [1])])
    outcome = run([], prefix, [-1], 0, WITH_UR)
    assert not outcome.conflict
    assert outcome.closure == {-1}


@pytest.mark.parametrize("run", [propagate, propagate_naive])
def test_empty_clause_conflicts(run):
    prefix = Prefix([("e", [1])])
    assert run([Clause(1, [])], prefix, [], 1, WITH_UR).conflict


@pytest.mark.parametrize("run", [propagate, propagate_naive])
def test_all_universal_clause_reduces_to_empty(run):
    prefix = Prefix([("a", [1])])
    clauses = [Clause(1, [1])]
    assert run(clauses, prefix, [], 0, WITH_UR).conflict
    outcome = run(clauses, prefix, [], 1, PLAIN_UP)
    assert not outcome.conflict
    assert outcome.trail == (1,)


def test_chain_of_units():
    prefix = Prefix([("e", [1, 2, 3, 4])])
    clauses = [Clause(1, [1, 2]), Clause(2, [-2, 3]), Clause(3, [-3, 4]), Clause(4, [-4, -1, 2])]
    outcome = propagate(clauses, prefix, [-1], 1, WITH_UR)
    assert not outcome.conflict
    assert outcome.trail == (-1, 2, 3, 4)


def test_dead_clauses_are_ignored():
    prefix = Prefix([("e", [1])])
    clauses = [Clause(1, [1], live=False)]
    assert not propagate_naive(clauses, prefix, [-1], 1, WITH_UR).conflict
    assert not propagate(clauses, prefix, [-1], 1, WITH_UR).conflict


def test_invalid_index_is_rejected():
    prefix = Prefix([("e", [1]), ("a", [2])])
    with pytest.raises(ValueError):
        propagate([], prefix, [], 3, WITH_UR)
    with pytest.raises(ValueError):
        propagate_naive([], prefix, [], 1, PLAIN_UP)


def test_excluded_clause_takes_no_part():
    prefix = Prefix([("e", [1])])
    engine = PropagationEngine(prefix, [Clause(1, [1]), Clause(2, [1])])
    assert engine.propagate([-1], 1, WITH_UR).conflict
    assert not engine.propagate([-1], 1, WITH_UR, exclude=[1, 2]).conflict


def test_watchers_are_restored_after_episodes():
    prefix = Prefix([("e", [1, 2]), ("a", [3]), ("e", [4])])
    clauses = [Clause(1, [1, 2, 3, 4]), Clause(2, [-1, 3, 4]), Clause(3, [-2, -4]), Clause(4, [3])]
    engine = PropagationEngine(prefix, clauses)
    for assumptions, i in (([-1, -2], 3), ([1], 0), ([2, 4], 2), ([-4], 1)):
        engine.propagate(assumptions, i, WITH_UR)
        assert engine.watch_violations() == []
    assert engine.episodes == 4


def test_detach_and_refresh():
    prefix = Prefix([("e", [1, 2]), ("a", [3])])
    first = Clause(1, [1, 3])
    engine = PropagationEngine(prefix, [first, Clause(2, [-1, 2])])
    assert engine.propagate([-2], 1, WITH_UR).conflict
    first.lits.remove(3)
    engine.refresh(first)
    assert engine.propagate([-2], 1, WITH_UR).conflict
    engine.detach(1)
    assert 1 not in engine
    assert not engine.propagate([-2], 1, WITH_UR).conflict
    assert engine.watch_violations() == []


def _compare(formula, engine, assumptions, i, mode):
    watched = engine.propagate(assumptions, i, mode)
    naive = propagate_naive(formula.clauses, formula.prefix, assumptions, i, mode)
    assert watched.conflict == naive.conflict
    if not watched.conflict:
        assert watched.closure == naive.closure
        for lit in watched.closure - set(assumptions):
            assert is_existential_under(formula.prefix.variable(abs(lit)), i)
    assert engine.watch_violations() == []
    return watched


def test_watched_engine_matches_naive_on_corpus():
    rng = random.Random(11)
    for formula in generate_corpus(CorpusSpec(max_vars=8, count=150, seed=5)):
        engine = PropagationEngine(formula.prefix, formula.clauses)
        variables = [v.id for v in formula.prefix.variables()]
        for _ in range(10):
            mode = rng.choice([WITH_UR, PLAIN_UP])
            i = formula.prefix.n if mode is PLAIN_UP else rng.randint(0, formula.prefix.n)
            picked = rng.sample(variables, rng.randint(0, min(3, len(variables))))
            assumptions = [v if rng.random() < 0.5 else -v for v in picked]
            outcome = _compare(formula, engine, assumptions, i, mode)
            if mode is PLAIN_UP and outcome.conflict:
                assert engine.propagate(assumptions, i, WITH_UR).conflict


@st.composite
def episodes(draw):
    num_vars = draw(st.integers(min_value=1, max_value=6))
    quants = draw(st.lists(st.sampled_from("ea"), min_size=num_vars, max_size=num_vars))
    blocks = [(q, [v]) for q, v in zip(quants, range(1, num_vars + 1))]
    literal = st.integers(min_value=1, max_value=num_vars).flatmap(
        lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(literal, min_size=1, max_size=4), max_size=8))
    formula = PCNF.from_lists(blocks, clauses)
    picked = draw(st.lists(st.integers(min_value=1, max_value=num_vars), unique=True, max_size=3))
    assumptions = [draw(st.sampled_from([v, -v])) for v in picked]
    i = draw(st.integers(min_value=0, max_value=formula.prefix.n))
    return formula, assumptions, i


@settings(max_examples=300, deadline=None)
@given(episodes())
def test_watched_engine_matches_naive_property(episode):
    formula, assumptions, i = episode
    engine = PropagationEngine(formula.prefix, formula.clauses)
    _compare(formula, engine, assumptions, i, WITH_UR)
    _compare(formula, engine, assumptions, formula.prefix.n, PLAIN_UP)
