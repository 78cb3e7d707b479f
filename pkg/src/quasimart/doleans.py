"""Doleans measures on the predictable grid and the isomorphism with
quasi-potentials.

A measure is stored on grid atoms ``B x ]d_t, d_{t+1}]`` where ``B`` is a
block of the partition at ``d_t``.  Every coarser predictable set is a
finite union of atoms, so evaluation is summation.  The atom of a process
``X`` carries ``P(1_B (X_t - X_{t+1}))``: decrements are counted positive,
so supermartingales map to nonnegative measures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .process import AdaptedProcess
from .space import FilteredSpace, PathFunction

ZERO = Fraction(0)


@dataclass(frozen=True)
class PredictableAtom:
    block: tuple
    interval: tuple


@dataclass(frozen=True)
class DoleansMeasure:
    """``values[t][k]`` is the mass of block ``k`` of partition ``t`` times
    the interval from index ``t`` to ``t + 1``."""

    space: FilteredSpace
    values: tuple

    def __post_init__(self):
        space = self.space
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.values)
        if len(rows) != max(space.horizon - 1, 0):
            raise ValueError(
                f"measure has {len(rows)} intervals, expected {space.horizon - 1}"
            )
        for t, row in enumerate(rows):
            if len(row) != len(space.blocks[t]):
                raise ValueError(
                    f"interval {t} has {len(row)} atoms, expected {len(space.blocks[t])}"
                )
        object.__setattr__(self, "values", rows)

    @classmethod
    def zero(cls, space):
        return cls(
            space,
            tuple(tuple(ZERO for _ in space.blocks[t]) for t in range(space.horizon - 1)),
        )

    def atoms(self):
        """Yield ``(PredictableAtom, value)`` by interval, then block order."""
        space = self.space
        for t, row in enumerate(self.values):
            interval = (space.indices[t], space.indices[t + 1])
            for members, v in zip(space.blocks[t], row):
                yield PredictableAtom(space.block_names(members), interval), v

    def value(self, atom):
        space = self.space
        t = space.position(atom.interval[0])
        if space.position(atom.interval[1]) != t + 1:
            raise PreconditionError(f"interval {atom.interval} is not consecutive")
        members = tuple(space.outcome_position(w) for w in atom.block)
        try:
            k = space.blocks[t].index(members)
        except ValueError:
            raise PreconditionError(
                f"{{{','.join(atom.block)}}} is not a block at index {atom.interval[0]}"
            ) from None
        return self.values[t][k]

    @property
    def mass(self):
        return sum((v for row in self.values for v in row), ZERO)

    def is_nonnegative(self):
        return all(v >= 0 for row in self.values for v in row)

    def _zip(self, other, op):
        if other.space is not self.space and other.space != self.space:
            raise ValueError("measures live on different spaces")
        return DoleansMeasure(
            self.space,
            tuple(
                tuple(op(a, b) for a, b in zip(r, s))
                for r, s in zip(self.values, other.values)
            ),
        )

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return DoleansMeasure(self.space, tuple(tuple(-v for v in r) for r in self.values))

    def __mul__(self, c):
        c = Fraction(c)
        return DoleansMeasure(self.space, tuple(tuple(c * v for v in r) for r in self.values))

    __rmul__ = __mul__

    def to_records(self):
        """Canonical dump: interval position, then block by first member."""
        return [
            {
                "block": list(atom.block),
                "interval": list(atom.interval),
                "value": str(v),
            }
            for atom, v in self.atoms()
        ]


def doleans_of(X):
    """Doleans measure of ``X``: atom (B, ]t, t+1]) maps to P(1_B (X_t - X_{t+1}))."""
    space = X.space
    p = space.prob
    rows = []
    for t in range(space.horizon - 1):
        now, nxt = X.values[t], X.values[t + 1]
        rows.append(
            tuple(
                sum((p[i] * (now[i] - nxt[i]) for i in members), ZERO)
                for members in space.blocks[t]
            )
        )
    return DoleansMeasure(space, tuple(rows))


def _blocks_inside(space, outcomes, t):
    """Per block of partition ``t``: does it lie inside ``outcomes``?

    Raises if ``outcomes`` cuts through a block.
    """
    inside = []
    for members in space.blocks[t]:
        hits = sum(i in outcomes for i in members)
        if hits not in (0, len(members)):
            raise PreconditionError(
                f"set is not measurable at index {space.indices[t]}: it splits block "
                f"{{{','.join(space.block_names(members))}}}"
            )
        inside.append(hits == len(members))
    return inside


def evaluate_rectangle(x, F, start, stop):
    """x(F x ]start, stop]) for F measurable at ``start``.

    Later partitions refine the one at ``start``, so every atom in the
    interval either lies inside F or misses it.
    """
    space = x.space
    s, t = space.position(start), space.position(stop)
    if t < s:
        raise PreconditionError(f"interval ]{start}, {stop}] is reversed")
    chosen = {space.outcome_position(w) for w in F}
    if s == t:
        _blocks_inside(space, chosen, s)
        return ZERO
    total = ZERO
    for u in range(s, t):
        inside = _blocks_inside(space, chosen, u)
        total += sum((v for v, keep in zip(x.values[u], inside) if keep), ZERO)
    return total


def pair_with_grid(x, coefficients):
    """Integrate per-interval coefficients against ``x``.

    ``coefficients[t]`` is a random variable measurable at index ``t``; it is
    read off on each block and multiplied by that block's atom.
    """
    space = x.space
    total = ZERO
    for t, (row, coeff) in enumerate(zip(x.values, coefficients)):
        for members, v in zip(space.blocks[t], row):
            total += coeff[members[0]] * v
    return total


def evaluate_general(x, U):
    """x(P^Delta(U)): project ``U`` on the full cut, then pair blockwise."""
    space = x.space
    coeffs = [space.condition(U.values[t + 1], t) for t in range(space.horizon - 1)]
    return pair_with_grid(x, coeffs)


def total_variation(x):
    return sum((abs(v) for row in x.values for v in row), ZERO)


def jordan(x):
    """Return ``(x_plus, x_minus)`` with ``x = x_plus - x_minus``, both >= 0."""
    pos = DoleansMeasure(x.space, tuple(tuple(max(v, ZERO) for v in r) for r in x.values))
    neg = DoleansMeasure(x.space, tuple(tuple(max(-v, ZERO) for v in r) for r in x.values))
    return pos, neg


def process_of(x):
    """The unique quasi-potential whose Doleans measure is ``x``.

    X_t on a block B of partition t is x(B x ]t, last]) / P(B).
    """
    space = x.space
    last = space.indices[-1]
    rows = []
    for t, d in enumerate(space.indices):
        per_block = [
            evaluate_rectangle(x, space.block_names(members), d, last) / mass
            for members, mass in zip(space.blocks[t], space.block_prob[t])
        ]
        rows.append(tuple(per_block[k] for k in space.block_of[t]))
    return AdaptedProcess(space, tuple(rows))


def marginal(x):
    """x_F({w}) = x evaluated on the indicator of {w} x Delta, per outcome.

    The grid starts above the first index, so the first slice of the
    indicator never carries mass.
    """
    space = x.space
    return {
        w: evaluate_general(x, PathFunction.indicator(space, [w]))
        for w in space.outcomes
    }


def upper_measure(x, F, index):
    """x(F x ]first, index]) for an arbitrary outcome set ``F``.

    F need not be measurable at any index: each interval's indicator is
    projected onto the partition at its left end first.
    """
    space = x.space
    stop = space.position(index)
    U = PathFunction.indicator(space, F, space.indices[1 : stop + 1])
    return evaluate_general(x, U)


def upper_density(x, index):
    """Density of F -> x(F x ]first, index]) with respect to P, per outcome.

    Projecting the singleton {w} onto the block B holding w at index t gives
    P(w) / P(B), so the density is the sum of x(B x ]t, t+1]) / P(B) over
    the intervals up to ``index``.
    """
    space = x.space
    stop = space.position(index)
    dens = [ZERO] * space.size
    for t in range(stop):
        per_block = [v / m for v, m in zip(x.values[t], space.block_prob[t])]
        for i, k in enumerate(space.block_of[t]):
            dens[i] += per_block[k]
    return tuple(dens)
