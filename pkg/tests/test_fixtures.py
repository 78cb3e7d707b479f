"""Frozen fixture values, recomputed by the library and by the naive oracle."""

import pytest

from quasimart import d_variation, doleans_of, doob_meyer, marginal, q_norm, rao, riesz
from quasimart import oracle
from quasimart.fixtures import EXPECTED
from quasimart.verify import brute_force_q_norm

NAMES = ["E1", "E2", "E2'", "E3"]


def _rows(raw, proc):
    return tuple(tuple(proc[d][w] for w in raw["outcomes"]) for d in raw["indices"])


@pytest.mark.parametrize("name", NAMES)
def test_library(fx, name):
    X, e = fx[name], EXPECTED[name]
    sp = X.space
    x = doleans_of(X)
    assert d_variation(X, sp.indices) == e["variation"]
    assert q_norm(X) == e["q_norm"]
    value, cut = brute_force_q_norm(X)
    assert (value, cut.labels) == (e["q_norm"], e["argmax"])
    assert x.values == e["atoms"]
    assert riesz(X).martingale.values == e["martingale"]
    assert riesz(X).quasi_potential.values == e["quasi_potential"]
    assert rao(X).pos_part.values == e["rao_pos"]
    assert rao(X).neg_part.values == e["rao_neg"]
    assert tuple(marginal(x)[w] for w in sp.outcomes) == e["marginal"]


@pytest.mark.parametrize("name", NAMES)
def test_oracle(fx, name):
    X, e = fx[name], EXPECTED[name]
    raw, rx = oracle.raw_space(X.space), oracle.raw_process(X)
    idx = raw["indices"]
    var = oracle.variation(raw, rx, idx)
    assert tuple(var[w] for w in raw["outcomes"]) == e["variation"]
    assert oracle.sup_variation(raw, rx) == e["q_norm"]
    atoms = oracle.doleans_atoms(raw, rx)
    for t, (a, b) in enumerate(zip(idx, idx[1:])):
        for block, v in zip(raw["filtration"][t], e["atoms"][t]):
            assert atoms[(block, a, b)] == v
    assert _rows(raw, oracle.martingale_part(raw, rx)) == e["martingale"]
    assert _rows(raw, oracle.quasi_potential_of_atoms(raw, atoms)) == e["quasi_potential"]
    assert oracle.is_martingale(raw, rx) == (e["q_norm"] == 0)


def test_doob_meyer_of_potential(fx):
    dm = doob_meyer(fx["E2'"])
    e = EXPECTED["E2'"]["doob_meyer"]
    assert (dm.terminal, dm.compensator.values) == (e["terminal"], e["compensator"])


def test_doob_meyer_of_rao_part(fx):
    X = rao(fx["E3"]).pos_part
    dm = doob_meyer(X)
    e = EXPECTED["E3"]["rao_pos_doob_meyer"]
    assert (dm.terminal, dm.compensator.values) == (e["terminal"], e["compensator"])
    raw = oracle.raw_space(X.space)
    atoms = oracle.doleans_atoms(raw, oracle.raw_process(X))
    for d, row in zip(raw["indices"], e["compensator"]):
        dens = oracle.upper_density(raw, atoms, d)
        assert tuple(dens[w] for w in raw["outcomes"]) == row
    assert oracle.is_supermartingale(raw, oracle.raw_process(X))
