"""Naive reference computations used to cross-check the main library.

Everything here works on plain data (outcome ids, probability dicts, lists of
frozensets, ``{index: {outcome: value}}`` maps) and follows the definitions
literally: conditional expectations are recomputed from scratch by searching
for the block that contains each outcome, suprema are taken by enumerating
every cut, and the Doleans measure is evaluated with the conditional
expectation in place.  Nothing is shared with the fast paths in
:mod:`quasimart.space`, :mod:`quasimart.process` or :mod:`quasimart.doleans`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

Raw = dict  # {"outcomes", "prob", "indices", "filtration"}


def raw_space(space):
    """Strip a :class:`~quasimart.space.FilteredSpace` down to plain data."""
    return {
        "outcomes": list(space.outcomes),
        "prob": {w: Fraction(p) for w, p in zip(space.outcomes, space.prob)},
        "indices": list(space.indices),
        "filtration": [[frozenset(b) for b in part] for part in space.filtration],
    }


def raw_process(process):
    space = process.space
    return {
        d: {w: Fraction(v) for w, v in zip(space.outcomes, row)}
        for d, row in zip(space.indices, process.values)
    }


def _partition(raw, index):
    return raw["filtration"][raw["indices"].index(index)]


def expectation(raw, y):
    return sum((raw["prob"][w] * y[w] for w in raw["outcomes"]), Fraction(0))


def cond_exp(raw, y, index):
    out = {}
    for w in raw["outcomes"]:
        block = next(b for b in _partition(raw, index) if w in b)
        mass = sum(raw["prob"][v] for v in block)
        out[w] = sum(raw["prob"][v] * y[v] for v in block) / mass
    return out


def variation(raw, x, cut):
    total = {w: Fraction(0) for w in raw["outcomes"]}
    for left, right in zip(cut, cut[1:]):
        e = cond_exp(raw, x[right], left)
        for w in raw["outcomes"]:
            total[w] += abs(x[left][w] - e[w])
    return total


def all_cuts(raw):
    idx = raw["indices"]
    for k in range(1, len(idx) + 1):
        for c in combinations(idx, k):
            yield list(c)


def sup_variation(raw, x):
    """Enumerate every nonempty cut; return the largest expected variation."""
    return max(expectation(raw, variation(raw, x, c)) for c in all_cuts(raw))


def is_martingale(raw, x):
    idx = raw["indices"]
    return all(cond_exp(raw, x[b], a) == x[a] for a, b in zip(idx, idx[1:]))


def is_supermartingale(raw, x):
    idx = raw["indices"]
    for a, b in zip(idx, idx[1:]):
        e = cond_exp(raw, x[b], a)
        if any(x[a][w] < e[w] for w in raw["outcomes"]):
            return False
    return True


def doleans_rectangle(raw, x, block, left, right):
    """x(F x ]left, right]) = P(1_F (X_left - E[X_right | F_left]))."""
    e = cond_exp(raw, x[right], left)
    return sum(
        (raw["prob"][w] * (x[left][w] - e[w]) for w in block), Fraction(0)
    )


def doleans_atoms(raw, x):
    """Map (block, left, right) -> value over consecutive grid atoms."""
    idx = raw["indices"]
    atoms = {}
    for a, b in zip(idx, idx[1:]):
        for block in _partition(raw, a):
            atoms[(block, a, b)] = doleans_rectangle(raw, x, block, a, b)
    return atoms


def martingale_part(raw, x):
    last = raw["indices"][-1]
    return {d: cond_exp(raw, x[last], d) for d in raw["indices"]}


def quasi_potential_of_atoms(raw, atoms):
    """X_d(w) = x(B x ]d, last]) / P(B), B the F_d block of w, summing the
    atoms of every later interval whose block sits inside B."""
    idx = raw["indices"]
    out = {}
    for pos, d in enumerate(idx):
        out[d] = {}
        for block in _partition(raw, d):
            mass = sum(raw["prob"][w] for w in block)
            total = sum(
                (v for (blk, a, _), v in atoms.items()
                 if idx.index(a) >= pos and blk <= block),
                Fraction(0),
            )
            for w in block:
                out[d][w] = total / mass
    return out


def upper_density(raw, atoms, index):
    """Density of F -> x(F x ]first, index]) on single outcomes.

    Each singleton {w} is projected onto F_a for every interval ]a, b] with
    b <= index: the projected coefficient on the block containing w is
    P(w) / P(block), so the mass is P(w) / P(block) * x(block atom)."""
    idx = raw["indices"]
    stop = idx.index(index)
    out = {}
    for w in raw["outcomes"]:
        total = Fraction(0)
        for (blk, a, b), v in atoms.items():
            if idx.index(b) <= stop and w in blk:
                mass = sum(raw["prob"][u] for u in blk)
                total += raw["prob"][w] / mass * v
        out[w] = total / raw["prob"][w]
    return out
