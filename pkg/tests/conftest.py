from fractions import Fraction

import pytest

from choresolver import Instance

R1_ROW = ["2/5", "3/10", "1/5", "1/10"]


@pytest.fixture
def r1() -> Instance:
    """Two identical agents, four chores, rows already normalized."""
    return Instance.make([R1_ROW, R1_ROW])


@pytest.fixture
def w1() -> Instance:
    """R1 costs with shares (1/4, 3/4)."""
    return Instance.make([R1_ROW, R1_ROW], weights=["1/4", "3/4"])


@pytest.fixture
def g1() -> Instance:
    """Two agents with opposite cardinal orders (not IDO)."""
    return Instance.make([["1/2", "3/10", "1/5"], ["1/5", "3/10", "1/2"]])


def frac(value) -> Fraction:
    return Fraction(value)
