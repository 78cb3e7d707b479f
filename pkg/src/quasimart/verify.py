"""Seeded generators, the brute-force norm, and the invariant suite.

Every random draw comes from :class:`random.Random` instances keyed by the
generator parameters, so a report is a pure function of its inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations

from . import oracle
from .decomp import (
    check_rao_minimality,
    doob_meyer,
    rao,
    riesz,
    stricker_projection,
)
from .doleans import (
    doleans_of,
    evaluate_general,
    evaluate_rectangle,
    jordan,
    marginal,
    process_of,
    total_variation,
)
from .errors import PreconditionError
from .fixtures import EXPECTED, fixtures
from .process import (
    AdaptedProcess,
    _natural_sides,
    classify,
    conditional_variation,
    d_variation,
    is_natural,
    q_norm,
)
from .scenario import Scenario, dump_scenario
from .space import Cut, FilteredSpace, PathFunction, project_simple

ZERO = Fraction(0)
KINDS = (
    "martingale",
    "positive_supermartingale",
    "potential",
    "quasimartingale",
    "natural_increasing",
    "adapted",
)
BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    num_outcomes: int = 4
    num_indices: int = 3
    value_bound: int = 8

    def __post_init__(self):
        if not 1 <= self.num_outcomes <= 16:
            raise ValueError("num_outcomes must lie in 1..16")
        if not 1 <= self.num_indices <= 8:
            raise ValueError("num_indices must lie in 1..8")
        if self.value_bound < 1:
            raise ValueError("value_bound must be positive")


def _rng(p, *tags):
    return random.Random(":".join(map(str, (p.seed, p.num_outcomes, p.num_indices, *tags))))


def _rational(rng, bound, nonneg=False):
    lo = 0 if nonneg else -bound
    return Fraction(rng.randint(lo, bound), rng.randint(1, bound))


def _split(rng, part):
    out = []
    for block in part:
        if len(block) > 1 and rng.random() < 0.5:
            block = list(block)
            rng.shuffle(block)
            cut = rng.randint(1, len(block) - 1)
            out.extend([block[:cut], block[cut:]])
        else:
            out.append(list(block))
    return out


def gen_space(p):
    """Positive rational probabilities and refining partitions grown by
    randomly splitting blocks, starting from the trivial partition."""
    rng = _rng(p, "space")
    outcomes = [f"w{i}" for i in range(p.num_outcomes)]
    weights = [rng.randint(1, p.value_bound) for _ in outcomes]
    total = sum(weights)
    prob = [Fraction(w, total) for w in weights]
    part = [list(outcomes)]
    if rng.random() < 0.3:
        part = _split(rng, part)
    filtration = [part]
    for _ in range(p.num_indices - 1):
        part = _split(rng, part)
        filtration.append(part)
    indices = [str(t + 1) for t in range(p.num_indices)]
    return FilteredSpace(outcomes, prob, indices, filtration)


def _measurable(rng, space, t, bound, nonneg=False):
    per_block = [_rational(rng, bound, nonneg) for _ in space.blocks[t]]
    return tuple(per_block[k] for k in space.block_of[t])


def _backward(rng, space, terminal, bound, slack):
    rows = [terminal]
    for t in range(space.horizon - 2, -1, -1):
        base = space.condition(rows[0], t)
        if slack:
            extra = _measurable(rng, space, t, bound, nonneg=True)
            base = tuple(a + b for a, b in zip(base, extra))
        rows.insert(0, base)
    return AdaptedProcess(space, tuple(rows))


def _increasing(rng, space, bound):
    rows = [tuple(ZERO for _ in range(space.size))]
    for t in range(space.horizon - 1):
        inc = _measurable(rng, space, t, bound, nonneg=True)
        rows.append(tuple(a + b for a, b in zip(rows[-1], inc)))
    return AdaptedProcess(space, tuple(rows))


def gen_process(p, kind, space, tag=""):
    """Draw a process of the given kind on ``space``.

    ``adapted`` draws every slice independently; the other kinds are built
    so that their defining predicate holds exactly.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown process kind {kind!r}")
    rng = _rng(p, "process", kind, tag)
    bound = p.value_bound
    last = space.horizon - 1
    if kind == "martingale":
        return _backward(rng, space, _measurable(rng, space, last, bound), bound, False)
    if kind == "positive_supermartingale":
        terminal = _measurable(rng, space, last, bound, nonneg=True)
        return _backward(rng, space, terminal, bound, True)
    if kind == "potential":
        zero = tuple(ZERO for _ in range(space.size))
        return _backward(rng, space, zero, bound, True)
    if kind == "natural_increasing":
        return _increasing(rng, space, bound)
    if kind == "quasimartingale":
        M = _backward(rng, space, _measurable(rng, space, last, bound), bound, False)
        return M + _increasing(rng, space, bound) - _increasing(rng, space, bound)
    return AdaptedProcess(
        space, tuple(_measurable(rng, space, t, bound) for t in range(space.horizon))
    )


def _merge(rng, part):
    blocks = [list(b) for b in part]
    rng.shuffle(blocks)
    out = []
    for b in blocks:
        if out and rng.random() < 0.5:
            out[-1].extend(b)
        else:
            out.append(b)
    return out


def _join(fine, coarse):
    """Finest common coarsening of two partitions of the same outcomes."""
    parent = {}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for part in (fine, coarse):
        for block in part:
            for w in block:
                parent.setdefault(w, w)
            for w in block[1:]:
                parent[find(w)] = find(block[0])
    groups = {}
    for w in parent:
        groups.setdefault(find(w), []).append(w)
    return list(groups.values())


def gen_subfiltration(p, space, tag=""):
    """A random filtration G with G_t coarser than F_t and G refining in t.

    Built backward: G_last merges blocks of F_last; G_t merges blocks of the
    join of F_t and G_{t+1}.
    """
    rng = _rng(p, "subfiltration", tag)
    parts = [_merge(rng, space.filtration[-1])]
    for t in range(space.horizon - 2, -1, -1):
        parts.insert(0, _merge(rng, _join(space.filtration[t], parts[0])))
    return FilteredSpace(space.outcomes, space.prob, space.indices, parts)


def _all_cuts(T):
    for k in range(1, T + 1):
        yield from combinations(range(T), k)


def brute_force_q_norm(X):
    """Maximize P(V^d(X)) over every nonempty cut.

    Ties go to the larger cut, then to the lexicographically smaller list of
    index positions.  Each pairwise term P(|X_s - E[X_t | F_s]|) is computed
    once and reused across cuts.
    """
    space = X.space
    T = space.horizon
    if T > BRUTE_FORCE_LIMIT:
        raise PreconditionError(f"brute force limited to {BRUTE_FORCE_LIMIT} indices")
    gap = {}
    for s in range(T):
        for t in range(s + 1, T):
            e = space.condition(X.values[t], s)
            gap[s, t] = space.expect(tuple(abs(a - b) for a, b in zip(X.values[s], e)))
    best_key, best = None, None
    for cut in _all_cuts(T):
        value = sum((gap[s, t] for s, t in zip(cut, cut[1:])), ZERO)
        key = (value, len(cut), tuple(-c for c in cut))
        if best_key is None or key > best_key:
            best_key, best = key, (value, cut)
    value, cut = best
    return value, Cut(tuple(space.indices[t] for t in cut))


# -- suite -------------------------------------------------------------


@dataclass
class SuiteReport:
    """Per-invariant pass/fail counts and the first counterexample of each
    failing invariant."""

    counts: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)

    def record(self, name, detail, make_example):
        passed, failed = self.counts.get(name, (0, 0))
        if detail is None:
            self.counts[name] = (passed + 1, failed)
            return
        self.counts[name] = (passed, failed + 1)
        if name not in self.counterexamples:
            example = make_example()
            example["detail"] = detail
            self.counterexamples[name] = example

    @property
    def failures(self):
        return sum(f for _, f in self.counts.values())

    @property
    def ok(self):
        return self.failures == 0

    def merge(self, other):
        """Combine two reports; the counterexample from the lower trial wins."""
        out = SuiteReport(dict(self.counts), dict(self.counterexamples))
        for name, (p, f) in other.counts.items():
            a, b = out.counts.get(name, (0, 0))
            out.counts[name] = (a + p, b + f)
        for name, ex in other.counterexamples.items():
            mine = out.counterexamples.get(name)
            if mine is None or _trial_key(ex) < _trial_key(mine):
                out.counterexamples[name] = ex
        return out

    def to_dict(self):
        return {
            "ok": self.ok,
            "failures": self.failures,
            "invariants": {
                name: {"passed": p, "failed": f}
                for name, (p, f) in sorted(self.counts.items())
            },
            "counterexamples": {k: self.counterexamples[k] for k in sorted(self.counterexamples)},
        }


def _trial_key(example):
    trial = example["trial"]
    return (0, trial, "") if isinstance(trial, int) else (-1, 0, trial)


@dataclass
class _Trial:
    label: object
    seed: int
    params: GenParams
    space: FilteredSpace
    processes: dict
    rng: random.Random
    doleans: object = doleans_of
    subfiltration: FilteredSpace | None = None

    def scenario(self):
        subs = {"G": self.subfiltration} if self.subfiltration is not None else {}
        return dump_scenario(Scenario(self.space, dict(self.processes), subs))

    def example(self):
        return {"trial": self.label, "seed": self.seed, "scenario": self.scenario()}

    def each(self, *kinds):
        for name, X in self.processes.items():
            if not kinds or name in kinds:
                yield name, X


def _random_cut(rng, T, min_size=1):
    size = rng.randint(min(min_size, T), T)
    return sorted(rng.sample(range(T), size))


def _labels(space, positions):
    return tuple(space.indices[t] for t in positions)


def _random_rv(rng, space, bound=8):
    return tuple(_rational(rng, bound) for _ in range(space.size))


def _random_path(rng, space, bound=8):
    return PathFunction(space, tuple(_random_rv(rng, space, bound) for _ in range(space.horizon)))


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


# Each check returns None on success or a short description of the failure.


def check_tower(tr):
    sp, rng = tr.space, tr.rng
    y = _random_rv(rng, sp)
    s, t = sorted(rng.choices(range(sp.horizon), k=2))
    if sp.condition(sp.condition(y, t), s) != sp.condition(y, s):
        return f"tower fails for positions {s} <= {t}"
    return None


def check_conditioning(tr):
    sp, rng = tr.space, tr.rng
    y, z = _random_rv(rng, sp), _random_rv(rng, sp)
    a, b = _rational(rng, 8), _rational(rng, 8)
    t = rng.randrange(sp.horizon)
    combo = tuple(a * u + b * v for u, v in zip(y, z))
    ey, ez = sp.condition(y, t), sp.condition(z, t)
    if sp.condition(combo, t) != tuple(a * u + b * v for u, v in zip(ey, ez)):
        return "conditional expectation is not linear"
    pos = tuple(abs(v) for v in y)
    if any(v < 0 for v in sp.condition(pos, t)):
        return "conditional expectation of a nonnegative variable is negative"
    if sp.expect(sp.condition(y, t)) != sp.expect(y):
        return "conditioning changed the mean"
    return None


def check_projection(tr):
    sp, rng = tr.space, tr.rng
    cut = Cut(_labels(sp, _random_cut(rng, sp.horizon)))
    U, V = _random_path(rng, sp), _random_path(rng, sp)
    c = _rational(rng, 8)
    W = PathFunction(sp, tuple(tuple(u + c * v for u, v in zip(r, s)) for r, s in zip(U.values, V.values)))
    pu, pv, pw = (project_simple(sp, Z, cut) for Z in (U, V, W))
    for a, b, w in zip(pu.coefficients, pv.coefficients, pw.coefficients):
        if w != tuple(x + c * y for x, y in zip(a, b)):
            return f"projection on cut {list(cut.labels)} is not linear"
    # Already predictable: the value at each right endpoint is measurable at the left one.
    pos = sp.cut_positions(cut)
    rows = [r for r in U.values]
    for s, t in zip(pos, pos[1:]):
        rows[t] = sp.condition(U.values[t], s)
    P = PathFunction(sp, tuple(rows))
    proj = project_simple(sp, P, cut)
    if any(coeff != rows[t] for coeff, t in zip(proj.coefficients, pos[1:])):
        return f"projection on cut {list(cut.labels)} is not idempotent"
    return None


def check_refinement_consistency(tr):
    sp, rng = tr.space, tr.rng
    fine = _random_cut(rng, sp.horizon)
    coarse = sorted(rng.sample(fine, rng.randint(1, len(fine))))
    f = project_simple(sp, _random_path(rng, sp), Cut(_labels(sp, coarse)))
    lifted = f.to_path()
    g = project_simple(sp, lifted, Cut(_labels(sp, fine)))
    for t in range(coarse[0] + 1, coarse[-1] + 1):
        for i in range(sp.size):
            if g.value_at(i, t) != f.value_at(i, t):
                return f"refining {coarse} to {fine} changed the value at ({i}, {t})"
    return None


def check_domination(tr):
    sp, rng = tr.space, tr.rng
    for name, X in tr.each():
        pos = _random_cut(rng, sp.horizon, min_size=2)
        fine = _labels(sp, pos)
        ends = (fine[0], fine[-1]) if len(fine) > 1 else fine
        lhs = conditional_variation(X, fine, fine[0])
        rhs = d_variation(X, ends)
        if not _leq(rhs, lhs):
            return f"{name}: E[V^d'|F] >= V^d fails for d' = {list(fine)}"
    return None


def check_refinement_monotonicity(tr):
    sp, rng = tr.space, tr.rng
    for name, X in tr.each():
        fine = _random_cut(rng, sp.horizon)
        rest = fine[1:]
        coarse = [fine[0]] + sorted(rng.sample(rest, rng.randint(0, len(rest))))
        first = sp.indices[fine[0]]
        big = conditional_variation(X, _labels(sp, fine), first)
        small = conditional_variation(X, _labels(sp, coarse), first)
        if not _leq(small, big):
            return f"{name}: refinement {coarse} -> {fine} lowered the conditional variation"
    return None


def check_brute_force(tr):
    for name, X in tr.each():
        value, cut = brute_force_q_norm(X)
        if value != q_norm(X):
            return f"{name}: fast norm {q_norm(X)} != brute force {value}"
        if X.space.expect(d_variation(X, X.space.full_cut())) != value:
            return f"{name}: full cut does not attain the supremum"
    return None


def check_seminorm(tr):
    rng = tr.rng
    X, Y = tr.processes["quasimartingale"], tr.processes["adapted"]
    c = _rational(rng, 8)
    if q_norm(X + Y) > q_norm(X) + q_norm(Y):
        return "triangle inequality fails"
    if q_norm(c * X) != abs(c) * q_norm(X):
        return f"homogeneity fails for c = {c}"
    for name, Z in tr.each():
        if (q_norm(Z) == 0) != classify(Z).martingale:
            return f"{name}: zero norm does not match the martingale flag"
    return None


def check_supermartingale_characterization(tr):
    sp = tr.space
    for name, X in tr.each():
        signed = [ZERO] * sp.size
        for t in range(sp.horizon - 1):
            e = sp.condition(X.values[t + 1], t)
            for i in range(sp.size):
                signed[i] += X.values[t][i] - e[i]
        full = d_variation(X, sp.full_cut())
        nonneg_terms = all(
            a >= b
            for t in range(sp.horizon - 1)
            for a, b in zip(X.values[t], sp.condition(X.values[t + 1], t))
        )
        if classify(X).supermartingale != nonneg_terms:
            return f"{name}: supermartingale flag disagrees with drift signs"
        if nonneg_terms and tuple(signed) != full:
            return f"{name}: signed and absolute variation differ for a supermartingale"
    return None


def _minus_integral(X, U):
    """-P(int P^Delta(U) dX) with increments attributed to right endpoints."""
    sp = X.space
    total = ZERO
    for t in range(sp.horizon - 1):
        coeff = sp.condition(U.values[t + 1], t)
        inc = tuple(b - a for a, b in zip(X.values[t], X.values[t + 1]))
        total += sp.expect(tuple(c * d for c, d in zip(coeff, inc)))
    return -total


def check_isometry(tr):
    sp, rng = tr.space, tr.rng
    ones = PathFunction.constant_in_time(sp, tuple(Fraction(1) for _ in range(sp.size)))
    for name, X in tr.each():
        x = tr.doleans(X)
        if total_variation(x) != q_norm(X):
            return f"{name}: |x| = {total_variation(x)} but q_norm = {q_norm(X)}"
        for U in (ones, _random_path(rng, sp)):
            if evaluate_general(x, U) != _minus_integral(X, U):
                return f"{name}: x(U) != -P(int P(U) dX)"
    return None


def check_doleans_linearity(tr):
    rng = tr.rng
    X, Y = tr.processes["quasimartingale"], tr.processes["adapted"]
    a, b = _rational(rng, 8), _rational(rng, 8)
    if tr.doleans(a * X + b * Y) != a * tr.doleans(X) + b * tr.doleans(Y):
        return "Doleans map is not linear"
    return None


def check_kernel(tr):
    for name, X in tr.each():
        zero = all(v == 0 for row in tr.doleans(X).values for v in row)
        if zero != classify(X).martingale:
            return f"{name}: zero measure does not match the martingale flag"
    return None


def _boundary_cases(tr):
    """Supermartingales pushed onto (or just past) a single-block boundary."""
    sp, rng = tr.space, tr.rng
    S = tr.processes.get("positive_supermartingale")
    if S is None or sp.horizon < 2:
        return []
    t = rng.randrange(sp.horizon - 1)
    k = rng.randrange(len(sp.blocks[t]))
    e = sp.condition(S.values[t + 1], t)
    out = []
    for shift in (ZERO, -Fraction(1, tr.params.value_bound ** 2)):
        rows = [list(r) for r in S.values]
        for i in sp.blocks[t][k]:
            rows[t][i] = e[i] + shift
        out.append((f"boundary{shift}", AdaptedProcess(sp, tuple(map(tuple, rows)))))
    return out


def check_positivity(tr):
    for name, X in list(tr.each()) + _boundary_cases(tr):
        if tr.doleans(X).is_nonnegative() != classify(X).supermartingale:
            return f"{name}: measure sign does not match the supermartingale flag"
    return None


def check_round_trip(tr):
    for name, X in tr.each():
        x = tr.doleans(X)
        B = riesz(X).quasi_potential
        if process_of(tr.doleans(B)) != B:
            return f"{name}: process_of(doleans_of(B)) != B"
        if tr.doleans(process_of(x)) != x:
            return f"{name}: doleans_of(process_of(x)) != x"
    return None


def check_local_variation(tr):
    sp = tr.space
    for name, X in tr.each():
        x = tr.doleans(X)
        for t, row in enumerate(x.values):
            e = sp.condition(X.values[t + 1], t)
            direct = sp.expect(tuple(abs(a - b) for a, b in zip(X.values[t], e)))
            if sum((abs(v) for v in row), ZERO) != direct:
                return f"{name}: local variation mismatch on interval {t}"
    return None


def check_rectangle_additivity(tr):
    sp, rng = tr.space, tr.rng
    X = tr.processes["quasimartingale"]
    x = tr.doleans(X)
    a, b, c = sorted(rng.choices(range(sp.horizon), k=3))
    blocks = [m for m in sp.blocks[a] if rng.random() < 0.5]
    F = [sp.outcomes[i] for m in blocks for i in m]
    d = sp.indices
    whole = evaluate_rectangle(x, F, d[a], d[c])
    if whole != evaluate_rectangle(x, F, d[a], d[b]) + evaluate_rectangle(x, F, d[b], d[c]):
        return f"rectangle additivity fails on positions {a} <= {b} <= {c}"
    if F and sp.horizon > 1 and a < c:
        U = PathFunction.indicator(sp, F, d[a + 1 : c + 1])
        if evaluate_general(x, U) != whole:
            return "evaluate_general disagrees with evaluate_rectangle"
    return None


def check_riesz(tr):
    sp, rng = tr.space, tr.rng
    for name, X in tr.each():
        dec = riesz(X)
        failed = [k for k, ok in dec.checks(X).items() if not ok]
        if failed:
            return f"{name}: {failed}"
        # Moving a nonzero martingale between the parts breaks the quasi-potential flag.
        N = gen_process(replace(tr.params, seed=rng.getrandbits(32)), "martingale", sp)
        moved = dec.quasi_potential + N
        nonzero = any(v != 0 for row in N.values for v in row)
        if classify(moved).quasi_potential == nonzero:
            return f"{name}: uniqueness perturbation not detected"
    return None


def check_rao(tr):
    for name, X in tr.each():
        dec = rao(X)
        failed = [k for k, ok in dec.checks(X).items() if not ok]
        if failed:
            return f"{name}: {failed}"
        x_plus, x_minus = jordan(tr.doleans(X))
        if riesz(dec.pos_part).quasi_potential != process_of(x_plus):
            return f"{name}: potential part of X' is not the potential of x+"
        if riesz(dec.neg_part).quasi_potential != process_of(x_minus):
            return f"{name}: potential part of X'' is not the potential of x-"
    return None


def check_rao_minimality_suite(tr):
    sp, rng = tr.space, tr.rng
    for name, X in tr.each("quasimartingale", "adapted", "potential"):
        dec = rao(X)
        kind = "potential" if classify(X).quasi_potential else "positive_supermartingale"
        S = gen_process(replace(tr.params, seed=rng.getrandbits(32)), kind, sp)
        report = check_rao_minimality(X, dec.pos_part + S, dec.neg_part + S)
        if not report:
            return f"{name}: {report.violation}"
    return None


def check_doob_meyer(tr):
    rng = tr.rng
    X = tr.processes["potential"]
    dec = doob_meyer(X)
    failed = [k for k, ok in dec.checks(X).items() if not ok]
    if failed:
        return f"potential: {failed}"
    nat = is_natural(dec.compensator, trials=64, seed=rng.getrandbits(32))
    if not nat or nat.mismatches:
        return "compensator fails the naturality integral check"
    return None


def check_doob_meyer_uniqueness(tr):
    """Alternatives N = M + Y with E[Y | F_first] = 0, scaled small so that
    B = E[N | F] - X often stays increasing; any such B that is also
    natural must coincide with A."""
    sp, rng = tr.space, tr.rng
    X = tr.processes["potential"]
    dec = doob_meyer(X)
    for _ in range(4):
        y = _random_rv(rng, sp)
        y = tuple(a - b for a, b in zip(y, sp.condition(y, 0)))
        scale = Fraction(1, rng.choice([1, 10, 100, 1000]))
        N = tuple(m + scale * v for m, v in zip(dec.terminal, y))
        mart = AdaptedProcess(sp, tuple(sp.condition(N, t) for t in range(sp.horizon)))
        B = mart - X
        c = classify(B)
        if c.increasing and c.natural and B != dec.compensator:
            return "a second natural compensator reconstructs the potential"
        if c.natural and any(
            sp.condition(N, t) != sp.condition(dec.terminal, t) for t in range(sp.horizon)
        ):
            return "alternative terminal differs in conditional expectation"
    return None


def check_stricker(tr):
    sp = tr.space
    G = tr.subfiltration
    for name, X in tr.each():
        XG = stricker_projection(X, G)
        if XG.space != G:
            return f"{name}: projection not carried by G"
        if q_norm(XG) > q_norm(X):
            return f"{name}: q_norm grew from {q_norm(X)} to {q_norm(XG)}"
        if stricker_projection(X, sp) != X or q_norm(stricker_projection(X, sp)) != q_norm(X):
            return f"{name}: projection on the filtration itself is not the identity"
    return None


def _non_natural(tr):
    """An increasing process with one increment that is not predictable, or None."""
    sp, rng = tr.space, tr.rng
    A = tr.processes["natural_increasing"]
    spots = [
        (t, m)
        for t in range(sp.horizon - 1)
        for m in sp.blocks[t]
        if len({sp.block_of[t + 1][i] for i in m}) > 1
    ]
    if not spots:
        return None
    t, members = rng.choice(spots)
    target = sp.block_of[t + 1][members[0]]
    rows = [list(r) for r in A.values]
    for u in range(t + 1, sp.horizon):
        for i in members:
            if sp.block_of[t + 1][i] == target:
                rows[u][i] += 1
    return AdaptedProcess(sp, tuple(map(tuple, rows)))


def check_naturalness(tr):
    rng = tr.rng
    A = tr.processes["natural_increasing"]
    nat = is_natural(A, trials=16, seed=rng.getrandbits(32))
    if not nat or nat.mismatches:
        return "generated natural process rejected"
    bad = _non_natural(tr)
    if bad is not None:
        res = is_natural(bad, trials=16, seed=rng.getrandbits(32))
        if res.natural:
            return "non-predictable increments accepted"
        lhs, rhs = _natural_sides(bad, *res.witness)
        if lhs == rhs:
            return "witness does not violate the integral identity"
    return None


def check_generators(tr):
    expect = {
        "martingale": "martingale",
        "positive_supermartingale": "supermartingale",
        "potential": "potential",
        "natural_increasing": "natural",
    }
    for name, flag in expect.items():
        c = classify(tr.processes[name])
        if not getattr(c, flag):
            return f"{name} generator broke its {flag} flag"
    if not classify(tr.processes["positive_supermartingale"]).positive:
        return "positive_supermartingale generator produced negative values"
    if q_norm(tr.processes["martingale"]) != 0:
        return "martingale generator has nonzero norm"
    return None


CHECKS = {
    "tower": check_tower,
    "conditioning": check_conditioning,
    "projection": check_projection,
    "refinement_consistency": check_refinement_consistency,
    "domination": check_domination,
    "refinement_monotonicity": check_refinement_monotonicity,
    "brute_force_agreement": check_brute_force,
    "seminorm": check_seminorm,
    "supermartingale_characterization": check_supermartingale_characterization,
    "isometry": check_isometry,
    "doleans_linearity": check_doleans_linearity,
    "kernel": check_kernel,
    "positivity": check_positivity,
    "round_trip": check_round_trip,
    "local_total_variation": check_local_variation,
    "rectangle_additivity": check_rectangle_additivity,
    "riesz": check_riesz,
    "rao": check_rao,
    "rao_minimality": check_rao_minimality_suite,
    "doob_meyer": check_doob_meyer,
    "doob_meyer_uniqueness": check_doob_meyer_uniqueness,
    "stricker": check_stricker,
    "naturalness": check_naturalness,
    "generators": check_generators,
}

# Checks that need every generated kind; fixtures run only the rest.
_GENERATED_ONLY = {
    "seminorm",
    "doleans_linearity",
    "rectangle_additivity",
    "rao_minimality",
    "doob_meyer",
    "doob_meyer_uniqueness",
    "naturalness",
    "generators",
}

MUTATIONS = {
    None: doleans_of,
    "flip_doleans_sign": lambda X: -doleans_of(X),
}


def _run_checks(report, tr, names):
    for name in names:
        try:
            detail = CHECKS[name](tr)
        except Exception as exc:  # a crash is a failure of that invariant
            detail = f"{type(exc).__name__}: {exc}"
        report.record(name, detail, tr.example)


def _fixture_values(library_doleans, name, X):
    """Compare library output and the naive oracle against the frozen table."""
    e = EXPECTED[name]
    sp = X.space
    x = library_doleans(X)
    r, ra = riesz(X), rao(X)
    m = marginal(x)
    got = {
        "variation": d_variation(X, sp.indices),
        "q_norm": q_norm(X),
        "argmax": brute_force_q_norm(X)[1].labels,
        "atoms": x.values,
        "martingale": r.martingale.values,
        "quasi_potential": r.quasi_potential.values,
        "rao_pos": ra.pos_part.values,
        "rao_neg": ra.neg_part.values,
        "marginal": tuple(m[w] for w in sp.outcomes),
    }
    bad = [k for k, v in got.items() if v != e[k]]
    if "doob_meyer" in e:
        dm = doob_meyer(X)
        if (dm.terminal, dm.compensator.values) != (
            e["doob_meyer"]["terminal"],
            e["doob_meyer"]["compensator"],
        ):
            bad.append("doob_meyer")
    if "rao_pos_doob_meyer" in e:
        dm = doob_meyer(ra.pos_part)
        if (dm.terminal, dm.compensator.values) != (
            e["rao_pos_doob_meyer"]["terminal"],
            e["rao_pos_doob_meyer"]["compensator"],
        ):
            bad.append("rao_pos_doob_meyer")

    # Independent recomputation.
    raw, rx = oracle.raw_space(sp), oracle.raw_process(X)
    idx, outs = raw["indices"], raw["outcomes"]
    rows = lambda proc: tuple(tuple(proc[d][w] for w in outs) for d in idx)  # noqa: E731
    var = oracle.variation(raw, rx, idx)
    atoms = oracle.doleans_atoms(raw, rx)
    oracle_atoms = tuple(
        tuple(atoms[(frozenset(b), a, c)] for b in sp.filtration[t])
        for t, (a, c) in enumerate(zip(idx, idx[1:]))
    )
    checks = {
        "oracle_variation": tuple(var[w] for w in outs) == e["variation"],
        "oracle_q_norm": oracle.sup_variation(raw, rx) == e["q_norm"],
        "oracle_atoms": oracle_atoms == e["atoms"],
        "oracle_martingale": rows(oracle.martingale_part(raw, rx)) == e["martingale"],
        "oracle_quasi_potential": rows(oracle.quasi_potential_of_atoms(raw, atoms))
        == e["quasi_potential"],
    }
    bad.extend(k for k, ok in checks.items() if not ok)
    return f"{name}: mismatched {bad}" if bad else None


def _fixture_trials(doleans):
    procs = fixtures()
    for name, X in procs.items():
        sp = X.space
        trivial = FilteredSpace(
            sp.outcomes, sp.prob, sp.indices, [[list(sp.outcomes)]] * sp.horizon
        )
        yield _Trial(
            label=name,
            seed=0,
            params=GenParams(0, sp.size, sp.horizon),
            space=sp,
            processes={name: X},
            rng=random.Random(f"fixture:{name}"),
            doleans=doleans,
            subfiltration=trivial,
        )


def _suite_for_fixture(report, tr):
    X = tr.processes[tr.label]
    _run_checks(report, tr, [n for n in CHECKS if n not in _GENERATED_ONLY])
    try:
        detail = _fixture_values(tr.doleans, tr.label, X)
    except Exception as exc:
        detail = f"{type(exc).__name__}: {exc}"
    report.record("fixture_values", detail, tr.example)


def trial_params(p, trials):
    """Per-trial generator parameters: sizes vary up to the limits in ``p``."""
    rng = random.Random(f"suite:{p.seed}")
    for i in range(trials):
        m = rng.randint(min(2, p.num_outcomes), p.num_outcomes)
        t = rng.randint(min(2, p.num_indices), p.num_indices)
        yield i, GenParams(rng.getrandbits(32), m, t, p.value_bound)


def make_trial(label, tp, doleans=doleans_of):
    space = gen_space(tp)
    processes = {kind: gen_process(tp, kind, space) for kind in KINDS}
    return _Trial(
        label=label,
        seed=tp.seed,
        params=tp,
        space=space,
        processes=processes,
        rng=_rng(tp, "checks"),
        doleans=doleans,
        subfiltration=gen_subfiltration(tp, space),
    )


def run_suite(p, trials, *, fixtures=False, mutation=None):
    """Evaluate every invariant on ``trials`` generated instances.

    With ``fixtures=True`` the canonical fixtures run first, including a
    comparison of their values against the frozen table.  ``mutation``
    substitutes a deliberately broken Doleans map to show the suite bites.
    """
    doleans = MUTATIONS[mutation]
    report = SuiteReport()
    if fixtures:
        for tr in _fixture_trials(doleans):
            _suite_for_fixture(report, tr)
    for i, tp in trial_params(p, trials):
        _run_checks(report, make_trial(i, tp, doleans), CHECKS)
    return report
