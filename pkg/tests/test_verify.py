from fractions import Fraction as Q

import pytest
from hypothesis import given

from quasimart import classify, is_natural, oracle, q_norm, validate_space
from quasimart.errors import PreconditionError
from quasimart.verify import (
    CHECKS,
    KINDS,
    GenParams,
    SuiteReport,
    brute_force_q_norm,
    gen_process,
    gen_space,
    run_suite,
)

from .conftest import gen_params


class TestBruteForce:
    def test_quasi_potential(self, fx):
        value, cut = brute_force_q_norm(fx["E3"])
        assert value == 1 and cut.labels == ("1", "2", "3")

    def test_ties_go_to_full_cut(self, fx):
        value, cut = brute_force_q_norm(fx["E1"])
        assert value == 0 and cut.labels == ("1", "2")

    def test_supermartingale(self, fx):
        value, cut = brute_force_q_norm(fx["E2"])
        assert value == Q(1, 2) and cut.labels == ("1", "2")

    def test_guard(self, fx, monkeypatch):
        monkeypatch.setattr("quasimart.verify.BRUTE_FORCE_LIMIT", 2)
        with pytest.raises(PreconditionError):
            brute_force_q_norm(fx["E3"])

    @given(gen_params(max_indices=6))
    def test_argmax_is_full_cut(self, p):
        X = gen_process(p, "quasimartingale", gen_space(p))
        value, cut = brute_force_q_norm(X)
        assert value == q_norm(X)
        assert cut.labels == X.space.indices


    @given(gen_params(max_outcomes=5, max_indices=5))
    def test_matches_naive_supremum(self, p):
        X = gen_process(p, "adapted", gen_space(p))
        raw = oracle.raw_space(X.space)
        assert oracle.sup_variation(raw, oracle.raw_process(X)) == brute_force_q_norm(X)[0]


class TestGenerators:
    def test_small_space_validates(self):
        space = gen_space(GenParams(seed=7, num_outcomes=2, num_indices=2))
        assert validate_space(space) is space

    @given(gen_params())
    def test_deterministic(self, p):
        assert gen_space(p) == gen_space(p)
        for kind in KINDS:
            assert gen_process(p, kind, gen_space(p)) == gen_process(p, kind, gen_space(p))

    @given(gen_params(max_indices=1))
    def test_single_index(self, p):
        space = gen_space(p)
        assert space.horizon == 1
        for kind in KINDS:
            assert q_norm(gen_process(p, kind, space)) == 0

    @given(gen_params())
    def test_flags_hold_by_construction(self, p):
        space = gen_space(p)
        m = gen_process(p, "martingale", space)
        assert classify(m).martingale and q_norm(m) == 0
        assert classify(gen_process(p, "potential", space)).potential
        s = classify(gen_process(p, "positive_supermartingale", space))
        assert s.positive and s.supermartingale
        assert is_natural(gen_process(p, "natural_increasing", space), trials=4)

    def test_unknown_kind(self):
        p = GenParams()
        with pytest.raises(ValueError):
            gen_process(p, "submartingale", gen_space(p))

    @pytest.mark.parametrize(
        "kw", [{"num_outcomes": 0}, {"num_outcomes": 17}, {"num_indices": 9}, {"value_bound": 0}]
    )
    def test_param_bounds(self, kw):
        with pytest.raises(ValueError):
            GenParams(**kw)


class TestSuite:
    def test_no_trials(self):
        report = run_suite(GenParams(), 0)
        assert report.counts == {} and report.counterexamples == {}
        assert report.ok

    def test_fixture_mode(self):
        report = run_suite(GenParams(), 0, fixtures=True)
        assert report.ok, report.counterexamples
        assert report.counts["fixture_values"] == (4, 0)

    def test_generated_trials_cover_every_invariant(self):
        report = run_suite(GenParams(seed=3), 5)
        assert report.ok, report.counterexamples
        assert set(report.counts) == set(CHECKS)
        assert all(p == 5 for p, _ in report.counts.values())

    def test_sign_mutation_breaks_isometry_on_e2(self):
        report = run_suite(GenParams(), 0, fixtures=True, mutation="flip_doleans_sign")
        assert not report.ok
        example = report.counterexamples["isometry"]
        assert example["trial"] == "E2"
        assert report.counts["positivity"][1] > 0

    def test_deterministic(self):
        a = run_suite(GenParams(seed=11), 4).to_dict()
        b = run_suite(GenParams(seed=11), 4).to_dict()
        assert a == b

    def test_merge_keeps_lowest_trial(self):
        a, b = SuiteReport(), SuiteReport()
        a.record("x", "bad", lambda: {"trial": 5})
        b.record("x", "bad", lambda: {"trial": 2})
        b.record("y", None, lambda: {"trial": 2})
        merged = a.merge(b)
        assert merged.counts == {"x": (0, 2), "y": (1, 0)}
        assert merged.counterexamples["x"]["trial"] == 2
        assert b.merge(a).to_dict() == merged.to_dict()
