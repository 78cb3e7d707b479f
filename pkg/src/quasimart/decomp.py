"""Riesz, Rao and Doob-Meyer decompositions, and projection onto a coarser
filtration.

Each decomposition record can re-check its own postconditions against the
input through ``checks(X)``, which returns an ordered ``{name: bool}`` map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .doleans import doleans_of, jordan, marginal, process_of, upper_density
from .errors import PreconditionError
from .process import (
    AdaptedProcess,
    classify,
    has_predictable_increments,
    is_increasing,
    is_positive,
    is_potential,
    is_supermartingale,
    q_norm,
)

ZERO = Fraction(0)


def _conditioned_terminal(space, y):
    """The martingale t -> E[y | F_t]."""
    return AdaptedProcess(space, tuple(space.condition(y, t) for t in range(space.horizon)))


@dataclass(frozen=True)
class RieszDecomposition:
    martingale: AdaptedProcess
    quasi_potential: AdaptedProcess

    def checks(self, X):
        m, b = classify(self.martingale), classify(self.quasi_potential)
        return {
            "sum_reconstructs_input": self.martingale + self.quasi_potential == X,
            "martingale_part_is_martingale": m.martingale,
            "remainder_is_quasi_potential": b.quasi_potential,
        }


@dataclass(frozen=True)
class RaoDecomposition:
    pos_part: AdaptedProcess
    neg_part: AdaptedProcess
    norm_certificate: tuple  # (q_norm(X), q_norm(pos_part), q_norm(neg_part))

    @property
    def certificate_text(self):
        total, a, b = self.norm_certificate
        return f"{total} = {a} + {b}"

    def checks(self, X):
        total, a, b = self.norm_certificate
        out = {
            "difference_reconstructs_input": self.pos_part - self.neg_part == X,
            "pos_part_positive_supermartingale": is_positive(self.pos_part)
            and is_supermartingale(self.pos_part),
            "neg_part_positive_supermartingale": is_positive(self.neg_part)
            and is_supermartingale(self.neg_part),
            "norm_additive": total == a + b,
        }
        if classify(X).quasi_potential:
            out["parts_are_potentials"] = is_potential(self.pos_part) and is_potential(
                self.neg_part
            )
        return out


@dataclass(frozen=True)
class DoobMeyerDecomposition:
    terminal: tuple
    compensator: AdaptedProcess

    def reconstruct(self):
        """The process t -> E[terminal | F_t] - A_t."""
        space = self.compensator.space
        return _conditioned_terminal(space, self.terminal) - self.compensator

    def checks(self, X):
        A = self.compensator
        return {
            "reconstructs_input": self.reconstruct() == X,
            "compensator_increasing": is_increasing(A),
            "compensator_natural": is_increasing(A) and has_predictable_increments(A),
            "compensator_starts_at_zero": all(v == 0 for v in A.values[0]),
            "terminal_nonnegative": all(v >= 0 for v in self.terminal),
        }


def riesz(X):
    """Split ``X`` into the martingale closed by its last slice plus a
    quasi-potential vanishing at the last index."""
    M = _conditioned_terminal(X.space, X.terminal)
    return RieszDecomposition(martingale=M, quasi_potential=X - M)


def rao(X):
    """Write ``X`` as a difference of two positive supermartingales whose
    quasimartingale norms add up to that of ``X``."""
    space = X.space
    x_plus, x_minus = jordan(doleans_of(X))
    b_plus, b_minus = process_of(x_plus), process_of(x_minus)
    m_last = riesz(X).martingale.terminal
    m_plus = _conditioned_terminal(space, tuple(max(v, ZERO) for v in m_last))
    m_minus = _conditioned_terminal(space, tuple(max(-v, ZERO) for v in m_last))
    pos, neg = m_plus + b_plus, m_minus + b_minus
    return RaoDecomposition(
        pos_part=pos,
        neg_part=neg,
        norm_certificate=(q_norm(X), q_norm(pos), q_norm(neg)),
    )


def _potential_violation(X):
    c = classify(X)
    for name in ("positive", "supermartingale", "quasi_potential"):
        if not getattr(c, name):
            return name
    return None


def doob_meyer(X):
    """Doob-Meyer decomposition X_t = E[M | F_t] - A_t of a potential.

    A_t is the density of F -> x(F x ]first, t]) and M the density of the
    marginal F -> x(F x Delta), where x is the Doleans measure of ``X``.
    """
    bad = _potential_violation(X)
    if bad is not None:
        raise PreconditionError(f"doob_meyer needs a potential; input is not {bad}")
    space = X.space
    x = doleans_of(X)
    A = AdaptedProcess(space, tuple(upper_density(x, d) for d in space.indices))
    mass = marginal(x)
    terminal = tuple(mass[w] / p for w, p in zip(space.outcomes, space.prob))
    return DoobMeyerDecomposition(terminal=terminal, compensator=A)


def stricker_projection(X, G):
    """Condition each slice of ``X`` on the coarser filtration ``G``."""
    if not G.is_coarsening_of(X.space):
        raise PreconditionError(
            "subfiltration must share outcomes, probabilities and labels and "
            "coarsen the partition at every index"
        )
    return AdaptedProcess(G, tuple(G.condition(X.values[t], t) for t in range(G.horizon)))


@dataclass(frozen=True)
class MinimalityReport:
    ok: bool
    violation: str | None = None

    def __bool__(self):
        return self.ok


def _first_violation(D, require_potential):
    """Describe the first failing inequality of D as a positive
    supermartingale (or potential), or None."""
    space = D.space
    for t, row in enumerate(D.values):
        for i, v in enumerate(row):
            if v < 0:
                return f"value {v} < 0 at index {space.indices[t]}, outcome {space.outcomes[i]}"
    for t in range(space.horizon - 1):
        e = space.condition(D.values[t + 1], t)
        for i, (a, b) in enumerate(zip(D.values[t], e)):
            if a < b:
                return (
                    f"supermartingale inequality fails at index {space.indices[t]}, "
                    f"outcome {space.outcomes[i]}: {a} < {b}"
                )
    if require_potential:
        for i, v in enumerate(D.terminal):
            if v != 0:
                return f"last slice is {v} at outcome {space.outcomes[i]}, not 0"
    return None


def check_rao_minimality(X, Y_pos, Y_neg):
    """Compare an alternative decomposition ``X = Y_pos - Y_neg`` with
    :func:`rao`; the differences must be positive supermartingales (potentials
    when both inputs are potentials)."""
    if Y_pos - Y_neg != X:
        raise PreconditionError("Y_pos - Y_neg does not equal X")
    for name, Y in (("Y_pos", Y_pos), ("Y_neg", Y_neg)):
        if not (is_positive(Y) and is_supermartingale(Y)):
            raise PreconditionError(f"{name} is not a positive supermartingale")
    dec = rao(X)
    potentials = is_potential(Y_pos) and is_potential(Y_neg)
    for name, D in (
        ("Y_pos - X'", Y_pos - dec.pos_part),
        ("Y_neg - X''", Y_neg - dec.neg_part),
    ):
        bad = _first_violation(D, potentials)
        if bad is not None:
            return MinimalityReport(False, f"{name}: {bad}")
    return MinimalityReport(True)
