"""Shared fixtures: the two-state worked-example net used throughout."""

from fractions import Fraction

import pytest

from ptpncov.intervals import Interval
from ptpncov.mset import Multiset
from ptpncov.nets import Configuration, PTPN, Transition, marking

INF = None


def iv(lo, hi, lo_open=False, hi_open=False):
    return Interval(lo, hi, lo_open, hi_open)


@pytest.fixture
def demo_net():
    """Two control states, three places (costs 3, 2, 0), two transitions."""
    t1 = Transition(
        "t1",
        "q1",
        "q2",
        inn=Multiset([("p1", iv(0, 3, lo_open=True))]),
        read=Multiset(),
        out=Multiset([("p2", iv(1, 5, hi_open=True)), ("p3", iv(2, INF, lo_open=True, hi_open=True))]),
        cost=1,
    )
    t2 = Transition(
        "t2",
        "q2",
        "q1",
        inn=Multiset([("p3", iv(1, 4, hi_open=True))]),
        read=Multiset([("p2", iv(2, 2))]),
        out=Multiset([("p1", iv(0, INF, hi_open=True))]),
        cost=3,
    )
    return PTPN(["q1", "q2"], {"p1": 3, "p2": 2, "p3": 0}, [t1, t2])


@pytest.fixture
def demo_initial():
    return Configuration(
        "q1",
        marking(
            [
                ("p1", Fraction(31, 10)),
                ("p1", Fraction(31, 10)),
                ("p1", Fraction(5, 2)),
                ("p2", Fraction(13, 2)),
                ("p3", Fraction(1, 10)),
                ("p3", Fraction(1, 10)),
            ]
        ),
    )


@pytest.fixture
def fractional_config():
    """The delta-form configuration whose abstraction is checked bit-for-bit."""
    return Configuration(
        "q1",
        marking(
            [
                ("p1", Fraction(21, 10)),
                ("p1", Fraction(1)),
                ("p1", Fraction(57, 20)),
                ("p1", Fraction(39, 10)),
                ("p2", Fraction(11, 10)),
                ("p2", Fraction(91, 10)),
                ("p2", Fraction(1)),
                ("p2", Fraction(197, 20)),
                ("p3", Fraction(81, 10)),
                ("p3", Fraction(17, 20)),
                ("p3", Fraction(29, 10)),
                ("p3", Fraction(49, 10)),
                ("p3", Fraction(9)),
            ]
        ),
    )
