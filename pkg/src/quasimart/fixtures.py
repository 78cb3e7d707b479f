"""Canonical two-outcome fixtures and their hand-checked values.

E1  martingale                 X = (1,1), (2,0)
E2  positive supermartingale   X = (1,1), (1,0)
E2' potential                  X = (1,1), (0,0)
E3  quasi-potential            X = (0,0), (1,-1), (0,0) on three indices

Outcomes are ``a`` and ``b`` with probability 1/2 each; the first
partition is trivial and every later one separates ``a`` from ``b``.
"""

from fractions import Fraction

from .process import AdaptedProcess
from .space import FilteredSpace

H = Fraction(1, 2)


def two_index_space():
    return FilteredSpace(("a", "b"), (H, H), ("1", "2"), ([["a", "b"]], [["a"], ["b"]]))


def three_index_space():
    return FilteredSpace(
        ("a", "b"), (H, H), ("1", "2", "3"), ([["a", "b"]], [["a"], ["b"]], [["a"], ["b"]])
    )


def _proc(space, rows):
    return AdaptedProcess(space, tuple(tuple(Fraction(v) for v in r) for r in rows))


def fixtures():
    """Name -> process, in the order E1, E2, E2', E3."""
    s2, s3 = two_index_space(), three_index_space()
    return {
        "E1": _proc(s2, [(1, 1), (2, 0)]),
        "E2": _proc(s2, [(1, 1), (1, 0)]),
        "E2'": _proc(s2, [(1, 1), (0, 0)]),
        "E3": _proc(s3, [(0, 0), (1, -1), (0, 0)]),
    }


def _q(*vals):
    return tuple(Fraction(v) for v in vals)


# Values per fixture.  Slices are listed index by index; ``atoms`` follows
# DoleansMeasure.values (interval, then block).  ``doob_meyer`` is given for
# the potential fixtures, ``rao_pos_doob_meyer`` for the Rao positive part.
EXPECTED = {
    "E1": {
        "variation": _q(0, 0),
        "q_norm": Fraction(0),
        "argmax": ("1", "2"),
        "atoms": (_q(0),),
        "martingale": (_q(1, 1), _q(2, 0)),
        "quasi_potential": (_q(0, 0), _q(0, 0)),
        "rao_pos": (_q(1, 1), _q(2, 0)),
        "rao_neg": (_q(0, 0), _q(0, 0)),
        "marginal": _q(0, 0),
    },
    "E2": {
        "variation": _q(H, H),
        "q_norm": H,
        "argmax": ("1", "2"),
        "atoms": (_q(H),),
        "martingale": (_q(H, H), _q(1, 0)),
        "quasi_potential": (_q(H, H), _q(0, 0)),
        "rao_pos": (_q(1, 1), _q(1, 0)),
        "rao_neg": (_q(0, 0), _q(0, 0)),
        "marginal": _q(Fraction(1, 4), Fraction(1, 4)),
    },
    "E2'": {
        "variation": _q(1, 1),
        "q_norm": Fraction(1),
        "argmax": ("1", "2"),
        "atoms": (_q(1),),
        "martingale": (_q(0, 0), _q(0, 0)),
        "quasi_potential": (_q(1, 1), _q(0, 0)),
        "rao_pos": (_q(1, 1), _q(0, 0)),
        "rao_neg": (_q(0, 0), _q(0, 0)),
        "marginal": _q(H, H),
        "doob_meyer": {"terminal": _q(1, 1), "compensator": (_q(0, 0), _q(1, 1))},
    },
    "E3": {
        "variation": _q(1, 1),
        "q_norm": Fraction(1),
        "argmax": ("1", "2", "3"),
        "atoms": (_q(0), _q(H, -H)),
        "martingale": (_q(0, 0), _q(0, 0), _q(0, 0)),
        "quasi_potential": (_q(0, 0), _q(1, -1), _q(0, 0)),
        "rao_pos": (_q(H, H), _q(1, 0), _q(0, 0)),
        "rao_neg": (_q(H, H), _q(0, 1), _q(0, 0)),
        "marginal": _q(H, -H),
        "rao_pos_doob_meyer": {
            "terminal": _q(1, 0),
            "compensator": (_q(0, 0), _q(0, 0), _q(1, 0)),
        },
    },
}
