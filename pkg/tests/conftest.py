import math
from pathlib import Path

import pytest

from teleroute import Link, Network, PureSchmidtChannel, XState

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def pure_n(n):
    """Pure channel with negativity n."""
    return PureSchmidtChannel(math.asin(n) / 2.0)


def build_triangle():
    # best A->B route is A-C-B: 0.9 * 0.8 beats the direct 0.5
    return Network(
        ["A", "B", "C"],
        [
            Link("A", "B", "ab", pure_n(0.5)),
            Link("A", "C", "ac", pure_n(0.9)),
            Link("C", "B", "cb", pure_n(0.8)),
        ],
    )


def build_witness_net():
    # mixed-coherence links with opposing mu/nu orderings; the best A->D
    # path goes through B on a prefix that is not the best A->B path
    return Network(
        ["A", "B", "C", "D"],
        [
            Link("A", "B", "ab", XState(0.475, 0.025, 0.025, 0.475, 0.025, 0.025)),
            Link("A", "C", "ac", PureSchmidtChannel(math.pi / 4)),
            Link("C", "B", "cb", XState(0.3, 0.2, 0.2, 0.3, 0.15, 0.2)),
            Link("B", "D", "bd", XState(0.275, 0.225, 0.225, 0.275, 0.225, 0.225)),
        ],
    )


def build_swap_triangle():
    # direct ab carries the route; ac and cb are spare links at C
    return Network(
        ["A", "B", "C"],
        [
            Link("A", "B", "ab", pure_n(0.5)),
            Link("A", "C", "ac", PureSchmidtChannel(math.pi / 4)),
            Link("C", "B", "cb", pure_n(0.2)),
        ],
    )


@pytest.fixture
def triangle():
    return build_triangle()


@pytest.fixture
def witness_net():
    return build_witness_net()


@pytest.fixture
def swap_triangle():
    return build_swap_triangle()
