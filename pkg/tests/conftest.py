import pytest

from subtv import Poset


@pytest.fixture
def figure1():
    # diamond-ish order: 1 below everything, 2 below 4; pairs (2,3), (3,4) free
    return Poset.from_relations(4, [(1, 2), (1, 3), (2, 4)])


@pytest.fixture
def antichain3():
    return Poset.from_relations(3, [])


@pytest.fixture
def chain3():
    return Poset.from_relations(3, [(1, 2), (2, 3)])


def small_posets():
    """Desk-scale posets (k <= 8) used for structural sweeps."""
    return [
        Poset.from_relations(1, []),
        Poset.from_relations(2, [(1, 2)]),
        Poset.from_relations(3, []),
        Poset.from_relations(3, [(1, 2), (2, 3)]),
        Poset.from_relations(4, [(1, 2), (1, 3), (2, 4)]),
        Poset.from_relations(4, []),
        Poset.from_relations(5, [(1, 3), (2, 3), (3, 4)]),
        Poset.from_relations(6, [(1, 2), (3, 4), (5, 6)]),
        Poset.from_relations(8, [(1, 2), (2, 3), (4, 5), (6, 7), (1, 8)]),
    ]
