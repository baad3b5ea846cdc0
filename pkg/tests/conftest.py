"""Shared fixtures: small formulas with hand-checked preprocessing behaviour."""

import sys
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from qratpp.formula import PCNF  # noqa: E402


@pytest.fixture
def e1():
    """forall x exists y. (x | y) & (-x | -y)"""
    return PCNF.from_lists([("a", [1]), ("e", [2])], [[1, 2], [-1, -2]])


@pytest.fixture
def e3():
    """exists a, b forall u. (a | b) & (b | u)"""
    return PCNF.from_lists([("e", [1, 2]), ("a", [3])], [[1, 2], [2, 3]])


@pytest.fixture
def e4():
    """exists e forall u. (e | u) & (-u | e)"""
    return PCNF.from_lists([("e", [1]), ("a", [2])], [[1, 2], [-2, 1]])


@pytest.fixture
def e5():
    """exists z forall x. (x | z) & (-x | -z)"""
    return PCNF.from_lists([("e", [1]), ("a", [2])], [[2, 1], [-2, -1]])


@pytest.fixture
def contradiction():
    """exists z. (z) & (-z)"""
    return PCNF.from_lists([("e", [1])], [[1], [-1]])


@pytest.fixture
def equivalence_chain():
    """exists a, b, c. (-a | b) & (a | -b) & (a | c) & (b | c)

    Each of the last two clauses is implied through the other one, so only
    one of them can go; which one depends on the checking order.
    """
    return PCNF.from_lists([("e", [1, 2, 3])], [[-1, 2], [1, -2], [1, 3], [2, 3]])
