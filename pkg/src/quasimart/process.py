"""Adapted processes, d-variation, the quasimartingale norm and the
classification predicates (martingale, supermartingale, potential, ...)."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import LabelError, NotAdaptedError, PreconditionError
from .space import Cut, FilteredSpace, SimplePredictable, _as_cut

ZERO = Fraction(0)


@dataclass(frozen=True)
class AdaptedProcess:
    """Rational values per (index, outcome), ``values[t][i]``.

    The slice at each index must be constant on the blocks of that index's
    partition; otherwise :class:`~quasimart.errors.NotAdaptedError` is raised.
    """

    space: FilteredSpace
    values: tuple

    def __post_init__(self):
        space = self.space
        rows = tuple(space.random_variable(r) for r in self.values)
        if len(rows) != space.horizon:
            raise ValueError(
                f"process has {len(rows)} slices, expected {space.horizon}"
            )
        for t, row in enumerate(rows):
            bad = space.nonmeasurable_block(row, t)
            if bad is not None:
                raise NotAdaptedError(
                    f"slice at index {space.indices[t]} is not constant on block "
                    f"{{{','.join(space.block_names(bad))}}}"
                )
        object.__setattr__(self, "values", rows)

    @classmethod
    def zeros(cls, space):
        zero = tuple(ZERO for _ in range(space.size))
        return cls(space, tuple(zero for _ in range(space.horizon)))

    def __getitem__(self, index):
        return self.values[self.space.position(index)]

    @property
    def terminal(self):
        return self.values[-1]

    def _check(self, other):
        if other.space is not self.space and other.space != self.space:
            raise ValueError("processes live on different spaces")

    def __add__(self, other):
        self._check(other)
        return AdaptedProcess(
            self.space,
            tuple(
                tuple(a + b for a, b in zip(r, s))
                for r, s in zip(self.values, other.values)
            ),
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return AdaptedProcess(self.space, tuple(tuple(-a for a in r) for r in self.values))

    def __mul__(self, c):
        c = Fraction(c)
        return AdaptedProcess(self.space, tuple(tuple(c * a for a in r) for r in self.values))

    __rmul__ = __mul__


def _gap(X, s, t):
    """|X_s - E[X_t | F_s]| pointwise."""
    e = X.space.condition(X.values[t], s)
    return tuple(abs(a - b) for a, b in zip(X.values[s], e))


def d_variation(X, d):
    """V^d(X) = sum over consecutive cut labels of |X_n - E[X_{n+1} | F_n]|."""
    positions = X.space.cut_positions(_as_cut(d))
    total = [ZERO] * X.space.size
    for s, t in zip(positions, positions[1:]):
        for i, g in enumerate(_gap(X, s, t)):
            total[i] += g
    return tuple(total)


def q_norm(X):
    """Quasimartingale norm: sup over cuts of P(V^d(X)).

    Refining a cut never decreases the expected variation, so the supremum
    is attained at the full cut.
    """
    return X.space.expect(d_variation(X, X.space.full_cut()))


def conditional_variation(X, d, index):
    """E[V^d(X) | F_index], where ``index`` must open the cut ``d``."""
    cut = _as_cut(d)
    if cut.labels[0] != index:
        raise LabelError(
            f"conditioning index {index!r} is not the first label of cut {list(cut.labels)}"
        )
    return X.space.condition(d_variation(X, cut), X.space.position(index))


def _drifts(X):
    """X_t - E[X_{t+1} | F_t] for each consecutive pair."""
    space = X.space
    return [
        tuple(a - b for a, b in zip(X.values[t], space.condition(X.values[t + 1], t)))
        for t in range(space.horizon - 1)
    ]


def is_martingale(X):
    return all(v == 0 for drift in _drifts(X) for v in drift)


def is_supermartingale(X):
    return all(v >= 0 for drift in _drifts(X) for v in drift)


def is_positive(X):
    return all(v >= 0 for row in X.values for v in row)


def is_increasing(X):
    vals = X.values
    if any(v != 0 for v in vals[0]):
        return False
    return all(
        0 <= a <= b for r, s in zip(vals, vals[1:]) for a, b in zip(r, s)
    )


def is_quasi_potential(X):
    return all(v == 0 for v in X.values[-1])


def is_potential(X):
    return is_positive(X) and is_supermartingale(X) and is_quasi_potential(X)


def _increment_violation(A):
    """First (t, block) where A_{t+1} - A_t is not F_t-measurable, or None."""
    space = A.space
    for t in range(space.horizon - 1):
        inc = tuple(b - a for a, b in zip(A.values[t], A.values[t + 1]))
        bad = space.nonmeasurable_block(inc, t)
        if bad is not None:
            return t, bad, inc
    return None


def has_predictable_increments(A):
    return _increment_violation(A) is None


@dataclass(frozen=True)
class ProcessClass:
    martingale: bool
    supermartingale: bool
    positive: bool
    increasing: bool
    natural: bool
    quasi_potential: bool
    potential: bool
    q_norm: Fraction

    def as_dict(self):
        return {
            "martingale": self.martingale,
            "supermartingale": self.supermartingale,
            "positive": self.positive,
            "increasing": self.increasing,
            "natural": self.natural,
            "quasi_potential": self.quasi_potential,
            "potential": self.potential,
            "q_norm": str(self.q_norm),
        }


def classify(X):
    drifts = _drifts(X)
    martingale = all(v == 0 for d in drifts for v in d)
    supermartingale = all(v >= 0 for d in drifts for v in d)
    positive = is_positive(X)
    increasing = is_increasing(X)
    quasi = is_quasi_potential(X)
    return ProcessClass(
        martingale=martingale,
        supermartingale=supermartingale,
        positive=positive,
        increasing=increasing,
        natural=increasing and has_predictable_increments(X),
        quasi_potential=quasi,
        potential=positive and supermartingale and quasi,
        q_norm=q_norm(X),
    )


def stieltjes_integral(f, A):
    """Pathwise integral of a simple predictable ``f`` against ``A``.

    The indicator of F x ]s, t] integrates to 1_F (A_t - A_s).
    """
    if f.space is not A.space and f.space != A.space:
        raise ValueError("integrand and integrator live on different spaces")
    positions = f.positions
    total = [ZERO] * A.space.size
    for c, s, t in zip(f.coefficients, positions, positions[1:]):
        lo, hi = A.values[s], A.values[t]
        for i in range(A.space.size):
            total[i] += c[i] * (hi[i] - lo[i])
    return tuple(total)


def _integral_against_grid(g, A):
    """Integral of ``g[t][i]`` (value on ]t-1, t]) against A on the full grid."""
    total = [ZERO] * A.space.size
    for t in range(1, A.space.horizon):
        lo, hi, row = A.values[t - 1], A.values[t], g[t]
        for i in range(A.space.size):
            total[i] += row[i] * (hi[i] - lo[i])
    return tuple(total)


@dataclass(frozen=True)
class NaturalityCheck:
    """Outcome of :func:`is_natural`.

    ``natural`` comes from the predictable-increment test.  ``witness`` is a
    pair ``(b, f)`` violating the integral identity when ``natural`` is
    false.  ``mismatches`` counts random trials on which the integral
    identity disagreed with the predicate (always 0 on a correct build).
    """

    natural: bool
    witness: tuple | None
    trials: int
    mismatches: int

    def __bool__(self):
        return self.natural


def _natural_sides(A, b, f):
    """P(b * int f dA) and P(int P^Delta(b) f dA) for the full-grid projection."""
    space = A.space
    lhs = space.expect(tuple(x * y for x, y in zip(b, stieltjes_integral(f, A))))
    g = [tuple(ZERO for _ in range(space.size))]
    for t in range(1, space.horizon):
        proj = space.condition(b, t - 1)
        g.append(tuple(proj[i] * f.value_at(i, t) for i in range(space.size)))
    rhs = space.expect(_integral_against_grid(g, A))
    return lhs, rhs


def _random_pair(space, rng, bound=8):
    b = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(space.size))
    picked = [t for t in range(space.horizon) if rng.random() < 0.6]
    if not picked:
        picked = [rng.randrange(space.horizon)]
    coeffs = []
    for t in picked[:-1]:
        per_block = [Fraction(rng.randint(-bound, bound)) for _ in space.blocks[t]]
        coeffs.append(tuple(per_block[k] for k in space.block_of[t]))
    cut = Cut(tuple(space.indices[t] for t in picked))
    return b, SimplePredictable(space, cut, tuple(coeffs))


def is_natural(A, trials=64, seed=0):
    """Decide whether the increasing process ``A`` is natural.

    On a finite grid an increasing process is natural exactly when every
    increment A_{t+1} - A_t is F_t-measurable.  That predicate decides the
    answer; the integral identity P(b int f dA) = P(int P(b) f dA) is then
    checked on ``trials`` random pairs drawn from ``seed``.
    """
    if not is_increasing(A):
        raise PreconditionError("is_natural needs an increasing process")
    space = A.space
    rng = random.Random(seed)
    mismatches = 0
    violation = _increment_violation(A)
    for _ in range(trials):
        b, f = _random_pair(space, rng)
        lhs, rhs = _natural_sides(A, b, f)
        if violation is None and lhs != rhs:
            mismatches += 1
    witness = None
    if violation is not None:
        t, members, inc = violation
        mass = sum((space.prob[i] for i in members), ZERO)
        mean = sum((space.prob[i] * inc[i] for i in members), ZERO) / mass
        # A singleton off the block mean always separates the two sides.
        w = next(i for i in members if inc[i] != mean)
        b = space.indicator([space.outcomes[w]])
        ones = tuple(Fraction(1) for _ in range(space.size))
        f = SimplePredictable(
            space, Cut((space.indices[t], space.indices[t + 1])), (ones,)
        )
        witness = (b, f)
    return NaturalityCheck(
        natural=violation is None, witness=witness, trials=trials, mismatches=mismatches
    )
