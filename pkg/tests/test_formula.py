"""Tests for the PCNF data model and statistics."""

import pytest

from qratpp.formula import (PCNF, Clause, FormulaStats, Prefix, QuantBlock, Quantifier,
                            compute_stats, is_tautological, reduction_report)


def test_prefix_levels_and_quantifiers():
    prefix = Prefix([("a", [1]), ("e", [2, 3]), ("a", [4])])
    assert prefix.n == 3
    assert prefix.level(1) == 1
    assert prefix.level(-3) == 2
    assert prefix.level(4) == 3
    assert prefix.is_universal(-1)
    assert prefix.is_existential(2)
    assert 5 not in prefix


def test_prefix_rejects_variable_in_two_blocks():
    with pytest.raises(ValueError):
        Prefix([("e", [1]), ("a", [1])])


def test_prefix_normalization_merges_and_drops_empty_blocks():
    prefix = Prefix([("e", [1]), ("e", [2]), ("a", []), ("a", [3]), ("e", [4])])
    normal = prefix.normalized()
    assert normal.blocks == (
        QuantBlock(Quantifier.EXISTENTIAL, (1, 2)),
        QuantBlock(Quantifier.UNIVERSAL, (3,)),
        QuantBlock(Quantifier.EXISTENTIAL, (4,)),
    )
    assert normal.is_normalized()
    assert not prefix.is_normalized()


def test_prefix_normalization_is_idempotent():
    prefix = Prefix([("a", [5]), ("e", []), ("a", [2]), ("e", [1, 3])])
    once = prefix.normalized()
    assert once.normalized() == once


def test_restricted_prefix_merges_around_unused_blocks():
    prefix = Prefix([("e", [3]), ("a", [2]), ("e", [1])])
    restricted = prefix.restricted({1, 3})
    assert restricted.n == 1
    assert restricted.level(1) == restricted.level(3) == 1


def test_literal_order_is_level_then_variable_then_sign():
    prefix = Prefix([("a", [3]), ("e", [1, 2])])
    assert prefix.sorted_lits([2, -1, 1, -3]) == [-3, 1, -1, 2]


def test_clause_rendering():
    clause = Clause(4, [1, -2])
    assert str(clause) == "(1 -2)"
    assert len(clause) == 2
    assert -2 in clause
    clause.live = False
    assert "dead" in repr(clause)


def test_is_tautological():
    assert is_tautological([1, -2, 2])
    assert not is_tautological([1, 2, 3])
    assert not is_tautological([])


def test_from_lists_places_free_variables_outermost():
    pcnf = PCNF.from_lists([("a", [2])], [[1, 2]])
    assert pcnf.prefix.blocks == (
        QuantBlock(Quantifier.EXISTENTIAL, (1,)),
        QuantBlock(Quantifier.UNIVERSAL, (2,)),
    )


def test_from_lists_free_variable_merges_with_outer_existential():
    pcnf = PCNF.from_lists([("e", [1]), ("a", [2])], [[3, 2], [1, 2]])
    assert pcnf.prefix.blocks[0] == QuantBlock(Quantifier.EXISTENTIAL, (3, 1))
    assert pcnf.prefix.n == 2


def test_from_lists_drops_tautologies_and_merges_duplicates():
    pcnf = PCNF.from_lists([("e", [1, 2])], [[1, -1], [2, 2, 1], []])
    assert pcnf.tautologies_dropped == 1
    assert [c.lits for c in pcnf.clauses] == [[1, 2], []]
    assert [c.id for c in pcnf.clauses] == [1, 2]
    assert pcnf.has_empty_clause()


def test_from_lists_keeps_variable_of_dropped_tautology():
    pcnf = PCNF.from_lists([], [[1, -1]])
    assert pcnf.live_count() == 0
    assert pcnf.prefix.blocks == (QuantBlock(Quantifier.EXISTENTIAL, (1,)),)


def test_unbound_literal_is_rejected():
    with pytest.raises(ValueError):
        PCNF(Prefix([("e", [1])]), [Clause(1, [1, 2])])


def test_copy_is_independent(e5):
    duplicate = e5.copy()
    duplicate.clause(1).lits.remove(2)
    duplicate.clause(2).live = False
    assert e5.clause(1).lits == [1, 2]
    assert e5.clause(2).live


def test_compact_drops_dead_clauses(e1):
    e1.clause(1).live = False
    assert e1.compact() == 1
    assert [c.id for c in e1.clauses] == [2]
    assert e1.get(1) is None


def test_stats_examples(e1):
    assert compute_stats(e1) == FormulaStats(2, 2, 2, 2)

    pcnf = PCNF.from_lists([("e", [1, 2]), ("a", [3])], [[1, 2], [2, 3]])
    assert compute_stats(pcnf) == FormulaStats(2, 2, 3, 1)

    assert compute_stats(PCNF.from_lists([], [])) == FormulaStats(0, 0, 0, 0)


def test_stats_ignore_dead_clauses_and_unused_blocks(e3):
    e3.clause(2).live = False
    stats = compute_stats(e3)
    assert stats == FormulaStats(1, 1, 2, 0)
    assert stats.literal_occurrences == 2


def test_reduction_report_rounds_half_up():
    before = FormulaStats(100, 4, 8, 3)
    after = FormulaStats(79, 3, 1, 2)
    report = reduction_report(before, after)
    assert report.clauses == 79
    assert report.qblocks == 75
    assert report.existential_literals == 13
    assert report.universal_literals == 67


def test_reduction_report_identity_and_zero_denominators():
    unchanged = {"#cl": 100, "#qb": 100, "#el": 100, "#ul": 100}
    stats = FormulaStats(5, 2, 7, 3)
    assert reduction_report(stats, stats).as_dict() == unchanged
    empty = FormulaStats()
    assert reduction_report(empty, empty).as_dict() == unchanged


def test_canonical_ignores_unused_variables():
    a = PCNF.from_lists([("e", [1, 5]), ("a", [2])], [[1, 2]])
    b = PCNF.from_lists([("e", [1]), ("a", [2])], [[2, 1]])
    assert a.canonical() == b.canonical()
