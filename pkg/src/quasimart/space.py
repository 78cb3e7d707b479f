"""Finite filtered probability spaces.

A space is a finite outcome set with strictly positive rational
probabilities, a finite linearly ordered index set (list order is the order)
and one partition of the outcomes per index.  Partition ``t + 1`` refines
partition ``t``, so the partitions generate an increasing family of
sigma-algebras.

Random variables are plain tuples of :class:`~fractions.Fraction`, one entry
per outcome in ``space.outcomes`` order.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import LabelError, NotAdaptedError, SpaceError

RandomVariable = tuple  # tuple[Fraction, ...], one value per outcome

__all__ = [
    "FilteredSpace",
    "Cut",
    "SimplePredictable",
    "PathFunction",
    "RandomVariable",
    "validate_space",
    "space_violations",
    "conditional_expectation",
    "project_simple",
    "evaluate_simple",
]


def _fmt_block(block):
    return "{" + ",".join(block) + "}"


def space_violations(outcomes, prob, indices, filtration):
    """Return a list of human-readable invariant violations (empty if valid)."""
    problems = []
    outcomes = list(outcomes)
    indices = list(indices)
    if not outcomes:
        problems.append("outcome list is empty")
    seen = set()
    for w in outcomes:
        if w in seen:
            problems.append(f"duplicate outcome id {w!r}")
        seen.add(w)

    prob = list(prob)
    if len(prob) != len(outcomes):
        problems.append(
            f"{len(prob)} probabilities given for {len(outcomes)} outcomes"
        )
    else:
        for w, p in zip(outcomes, prob):
            if p <= 0:
                problems.append(f"probability of outcome {w!r} is {p}, not > 0")
        total = sum(prob, Fraction(0))
        if total != 1:
            problems.append(f"probabilities sum to {total} ≠ 1")

    if not indices:
        problems.append("index list is empty")
    seen = set()
    for d in indices:
        if d in seen:
            problems.append(f"duplicate index label {d!r}")
        seen.add(d)

    filtration = [list(map(list, part)) for part in filtration]
    if len(filtration) != len(indices):
        problems.append(
            f"{len(filtration)} partitions given for {len(indices)} indices"
        )
        return problems

    known = set(outcomes)
    well_formed = True
    for d, part in zip(indices, filtration):
        owner = {}
        for block in part:
            if not block:
                problems.append(f"partition at index {d} has an empty block")
                well_formed = False
            for w in block:
                if w not in known:
                    problems.append(
                        f"partition at index {d} names unknown outcome {w!r}"
                    )
                    well_formed = False
                elif w in owner:
                    problems.append(
                        f"partition at index {d}: outcome {w!r} lies in two blocks"
                    )
                    well_formed = False
                owner[w] = id(block)
        missing = [w for w in outcomes if w not in owner]
        if missing:
            problems.append(
                f"partition at index {d} does not cover outcomes {missing}"
            )
            well_formed = False
    if not well_formed:
        return problems

    for t in range(1, len(indices)):
        coarse = {}
        for k, block in enumerate(filtration[t - 1]):
            for w in block:
                coarse[w] = k
        for block in filtration[t]:
            if len({coarse[w] for w in block}) > 1:
                problems.append(
                    f"partition at index {indices[t]} does not refine index "
                    f"{indices[t - 1]}: block {_fmt_block(block)} meets "
                    f"several blocks of index {indices[t - 1]}"
                )
    return problems


@dataclass(frozen=True)
class FilteredSpace:
    """A validated finite filtered probability space.

    Inputs are normalized on construction: probabilities become
    :class:`Fraction`, members of each block are listed in outcome order and
    blocks are ordered by their first member.  Invalid input raises
    :class:`~quasimart.errors.SpaceError` listing every violation.
    """

    outcomes: tuple
    prob: tuple
    indices: tuple
    filtration: tuple

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        prob = tuple(Fraction(p) for p in self.prob)
        indices = tuple(self.indices)
        problems = space_violations(outcomes, prob, indices, self.filtration)
        if problems:
            raise SpaceError(problems)
        order = {w: i for i, w in enumerate(outcomes)}
        filtration = tuple(
            tuple(
                sorted(
                    (tuple(sorted(block, key=order.__getitem__)) for block in part),
                    key=lambda b: order[b[0]],
                )
            )
            for part in self.filtration
        )
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "prob", prob)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "filtration", filtration)

    # -- lookups ---------------------------------------------------------

    @cached_property
    def _outcome_pos(self):
        return {w: i for i, w in enumerate(self.outcomes)}

    @cached_property
    def _index_pos(self):
        return {d: t for t, d in enumerate(self.indices)}

    @property
    def size(self):
        return len(self.outcomes)

    @property
    def horizon(self):
        return len(self.indices)

    def outcome_position(self, outcome):
        try:
            return self._outcome_pos[outcome]
        except KeyError:
            raise LabelError(f"unknown outcome {outcome!r}") from None

    def position(self, index):
        try:
            return self._index_pos[index]
        except KeyError:
            raise LabelError(f"unknown index label {index!r}") from None

    @cached_property
    def blocks(self):
        """``blocks[t][k]`` is the tuple of outcome positions in block ``k``."""
        pos = self._outcome_pos
        return tuple(
            tuple(tuple(pos[w] for w in block) for block in part)
            for part in self.filtration
        )

    @cached_property
    def block_of(self):
        """``block_of[t][i]`` is the block number of outcome ``i`` at ``t``."""
        out = []
        for part in self.blocks:
            row = [0] * self.size
            for k, members in enumerate(part):
                for i in members:
                    row[i] = k
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def block_prob(self):
        p = self.prob
        return tuple(
            tuple(sum((p[i] for i in members), Fraction(0)) for members in part)
            for part in self.blocks
        )

    # -- integration -----------------------------------------------------

    def expect(self, y):
        """P(y) = sum over outcomes of prob * value."""
        return sum((p * v for p, v in zip(self.prob, y)), Fraction(0))

    def condition(self, y, t):
        """Conditional expectation of ``y`` given the partition at position ``t``."""
        p = self.prob
        means = [
            sum((p[i] * y[i] for i in members), Fraction(0)) / mass
            for members, mass in zip(self.blocks[t], self.block_prob[t])
        ]
        return tuple(means[k] for k in self.block_of[t])

    def is_measurable(self, y, t):
        return all(
            all(y[i] == y[members[0]] for i in members) for members in self.blocks[t]
        )

    def nonmeasurable_block(self, y, t):
        """First block of partition ``t`` on which ``y`` is not constant, or None."""
        for members in self.blocks[t]:
            if any(y[i] != y[members[0]] for i in members):
                return members
        return None

    def block_names(self, members):
        return tuple(self.outcomes[i] for i in members)

    def cut_positions(self, cut):
        """Validate ``cut`` against this space and return its index positions."""
        labels = cut.labels if isinstance(cut, Cut) else tuple(cut)
        if not labels:
            raise LabelError("a cut needs at least one index label")
        positions = tuple(self.position(d) for d in labels)
        if any(a >= b for a, b in zip(positions, positions[1:])):
            raise LabelError(f"cut {list(labels)} is not strictly increasing")
        return positions

    def full_cut(self):
        return Cut(self.indices)

    def random_variable(self, values):
        values = tuple(Fraction(v) for v in values)
        if len(values) != self.size:
            raise ValueError(
                f"random variable has {len(values)} entries, expected {self.size}"
            )
        return values

    def indicator(self, outcomes):
        chosen = {self.outcome_position(w) for w in outcomes}
        return tuple(Fraction(int(i in chosen)) for i in range(self.size))

    def is_coarsening_of(self, other):
        """True if every block of ``self`` is a union of ``other``'s blocks,
        index by index, and both share outcomes, probabilities and labels."""
        if (self.outcomes, self.prob, self.indices) != (
            other.outcomes,
            other.prob,
            other.indices,
        ):
            return False
        return all(
            len({mine[i] for i in members}) == 1
            for mine, theirs in zip(self.block_of, other.blocks)
            for members in theirs
        )


def validate_space(raw):
    """Build a :class:`FilteredSpace` from a mapping or return an existing one.

    Raises :class:`SpaceError` with every violated invariant otherwise.
    """
    if isinstance(raw, FilteredSpace):
        return raw
    if not isinstance(raw, Mapping):
        raise SpaceError(["space candidate must be a mapping"])
    missing = [k for k in ("outcomes", "prob", "indices", "filtration") if k not in raw]
    if missing:
        raise SpaceError([f"missing field {k!r}" for k in missing])
    return FilteredSpace(
        outcomes=raw["outcomes"],
        prob=raw["prob"],
        indices=raw["indices"],
        filtration=raw["filtration"],
    )


@dataclass(frozen=True)
class Cut:
    """A nonempty strictly increasing selection of index labels."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise LabelError("a cut needs at least one index label")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def parse(cls, text):
        """Parse the CLI form ``"l1,l2,..."``."""
        return cls(tuple(s.strip() for s in text.split(",") if s.strip()))

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)


def _as_cut(d):
    return d if isinstance(d, Cut) else Cut(tuple(d))


@dataclass(frozen=True)
class SimplePredictable:
    """A simple predictable integrand on the grid of ``cut``.

    ``coefficients[n]`` is the value on ]cut[n], cut[n+1]] and must be
    measurable with respect to the partition at ``cut[n]``.
    """

    space: FilteredSpace
    cut: Cut
    coefficients: tuple

    def __post_init__(self):
        cut = _as_cut(self.cut)
        positions = self.space.cut_positions(cut)
        coeffs = tuple(self.space.random_variable(c) for c in self.coefficients)
        if len(coeffs) != len(positions) - 1:
            raise ValueError(
                f"cut with {len(positions)} labels needs {len(positions) - 1} "
                f"coefficients, got {len(coeffs)}"
            )
        for n, (t, c) in enumerate(zip(positions, coeffs)):
            if not self.space.is_measurable(c, t):
                raise NotAdaptedError(
                    f"coefficient {n} is not measurable at index {cut.labels[n]}"
                )
        object.__setattr__(self, "cut", cut)
        object.__setattr__(self, "coefficients", coeffs)

    @cached_property
    def positions(self):
        return self.space.cut_positions(self.cut)

    def value_at(self, i, t):
        """Value at outcome position ``i`` and index position ``t``."""
        pos = self.positions
        for n in range(len(pos) - 1):
            if pos[n] < t <= pos[n + 1]:
                return self.coefficients[n][i]
        return Fraction(0)

    def to_path(self):
        """The same function as a :class:`PathFunction` on the full grid."""
        space = self.space
        return PathFunction(
            space,
            tuple(
                tuple(self.value_at(i, t) for i in range(space.size))
                for t in range(space.horizon)
            ),
        )


@dataclass(frozen=True)
class PathFunction:
    """A bounded function on outcomes x indices; no adaptedness required.

    ``values[t][i]`` is the value at index position ``t``, outcome ``i``.
    """

    space: FilteredSpace
    values: tuple

    def __post_init__(self):
        rows = tuple(self.space.random_variable(r) for r in self.values)
        if len(rows) != self.space.horizon:
            raise ValueError(
                f"path function has {len(rows)} slices, expected {self.space.horizon}"
            )
        object.__setattr__(self, "values", rows)

    @classmethod
    def indicator(cls, space, outcomes, indices=None):
        """Indicator of ``outcomes`` x ``indices`` (all indices by default)."""
        row = space.indicator(outcomes)
        zero = tuple(Fraction(0) for _ in range(space.size))
        chosen = (
            set(range(space.horizon))
            if indices is None
            else {space.position(d) for d in indices}
        )
        return cls(space, tuple(row if t in chosen else zero for t in range(space.horizon)))

    @classmethod
    def constant_in_time(cls, space, y):
        y = space.random_variable(y)
        return cls(space, tuple(y for _ in range(space.horizon)))


def conditional_expectation(space, y, index):
    """E[y | F_index], computed blockwise and exactly."""
    return space.condition(space.random_variable(y), space.position(index))


def project_simple(space, U, d):
    """Project a path function onto simple predictable integrands of cut ``d``.

    The coefficient on ]d[n], d[n+1]] is E[U at d[n+1] | F at d[n]].
    """
    cut = _as_cut(d)
    positions = space.cut_positions(cut)
    coeffs = tuple(
        space.condition(U.values[b], a) for a, b in zip(positions, positions[1:])
    )
    return SimplePredictable(space, cut, coeffs)


def evaluate_simple(f, outcome, index):
    """Point value of ``f``; zero outside the cut's half-open intervals."""
    return f.value_at(f.space.outcome_position(outcome), f.space.position(index))
