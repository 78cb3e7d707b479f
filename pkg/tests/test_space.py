from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quasimart import (
    Cut,
    FilteredSpace,
    PathFunction,
    SimplePredictable,
    SpaceError,
    conditional_expectation,
    evaluate_simple,
    project_simple,
    validate_space,
)
from quasimart.errors import LabelError, NotAdaptedError
from quasimart.fixtures import three_index_space, two_index_space

from .conftest import rationals, spaces

H = Q(1, 2)


def e1_raw(**changes):
    raw = {
        "outcomes": ["a", "b"],
        "prob": [H, H],
        "indices": ["1", "2"],
        "filtration": [[["a", "b"]], [["a"], ["b"]]],
    }
    raw.update(changes)
    return raw


class TestValidate:
    def test_fixture_is_valid(self):
        space = validate_space(e1_raw())
        assert space.size == 2 and space.horizon == 2

    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(SpaceError) as info:
            validate_space(e1_raw(prob=[H, Q(1, 3)]))
        assert "probabilities sum to 5/6 ≠ 1" in info.value.violations

    def test_reversed_filtration_does_not_refine(self):
        with pytest.raises(SpaceError) as info:
            validate_space(e1_raw(filtration=[[["a"], ["b"]], [["a", "b"]]]))
        assert any(
            v.startswith("partition at index 2 does not refine index 1")
            for v in info.value.violations
        )

    def test_every_violation_is_reported(self):
        raw = e1_raw(prob=[Q(0), Q(1, 3)], indices=["1", "1"])
        with pytest.raises(SpaceError) as info:
            validate_space(raw)
        text = " | ".join(info.value.violations)
        assert "not > 0" in text
        assert "sum to 1/3" in text
        assert "duplicate index label '1'" in text

    def test_partition_must_cover(self):
        with pytest.raises(SpaceError, match="does not cover"):
            validate_space(e1_raw(filtration=[[["a", "b"]], [["a"]]]))

    def test_passthrough(self):
        space = two_index_space()
        assert validate_space(space) is space

    def test_blocks_are_canonical(self):
        space = FilteredSpace(
            ("a", "b", "c"), (Q(1, 3),) * 3, ("1",), ([["c", "a"], ["b"]],)
        )
        assert space.filtration == ((("a", "c"), ("b",)),)


class TestConditionalExpectation:
    def test_averages_over_trivial_block(self):
        assert conditional_expectation(two_index_space(), (2, 0), "1") == (1, 1)

    def test_measurable_variable_is_fixed(self):
        assert conditional_expectation(three_index_space(), (1, -1), "2") == (1, -1)

    @given(spaces(), rationals)
    def test_constants(self, space, c):
        for d in space.indices:
            assert conditional_expectation(space, (c,) * space.size, d) == (c,) * space.size

    def test_unknown_index(self):
        with pytest.raises(LabelError):
            conditional_expectation(two_index_space(), (1, 1), "9")

    @given(spaces(), st.data())
    def test_tower_and_averaging(self, space, data):
        y = tuple(data.draw(rationals) for _ in range(space.size))
        s = data.draw(st.integers(0, space.horizon - 1))
        t = data.draw(st.integers(s, space.horizon - 1))
        assert space.condition(space.condition(y, t), s) == space.condition(y, s)
        assert space.expect(space.condition(y, t)) == space.expect(y)

    @given(spaces(), st.data())
    def test_linear_and_positive(self, space, data):
        y = tuple(data.draw(rationals) for _ in range(space.size))
        z = tuple(data.draw(rationals) for _ in range(space.size))
        a, b = data.draw(rationals), data.draw(rationals)
        t = data.draw(st.integers(0, space.horizon - 1))
        lhs = space.condition(tuple(a * u + b * v for u, v in zip(y, z)), t)
        ey, ez = space.condition(y, t), space.condition(z, t)
        assert lhs == tuple(a * u + b * v for u, v in zip(ey, ez))
        assert all(v >= 0 for v in space.condition(tuple(abs(v) for v in y), t))


class TestProjection:
    def test_indicator_on_two_indices(self):
        space = two_index_space()
        f = project_simple(space, PathFunction.indicator(space, ["a"]), ["1", "2"])
        assert f.coefficients == ((H, H),)

    def test_constant_one(self):
        space = three_index_space()
        ones = PathFunction.constant_in_time(space, (1, 1))
        for cut in (["1", "2", "3"], ["1", "3"], ["2", "3"]):
            f = project_simple(space, ones, cut)
            assert all(c == (1, 1) for c in f.coefficients)

    def test_indicator_on_three_indices(self):
        space = three_index_space()
        f = project_simple(space, PathFunction.indicator(space, ["a"]), ["1", "2", "3"])
        assert f.coefficients == ((H, H), (1, 0))
        assert evaluate_simple(f, "b", "3") == 0
        assert evaluate_simple(f, "a", "3") == 1

    def test_invalid_cut(self):
        space = two_index_space()
        with pytest.raises(LabelError):
            project_simple(space, PathFunction.indicator(space, ["a"]), ["2", "1"])

    @given(spaces(), st.data())
    def test_idempotent_on_predictable_input(self, space, data):
        rows = [
            tuple(data.draw(rationals) for _ in range(space.size)) for _ in range(space.horizon)
        ]
        for t in range(1, space.horizon):
            rows[t] = space.condition(rows[t], t - 1)
        f = project_simple(space, PathFunction(space, tuple(rows)), space.full_cut())
        assert list(f.coefficients) == rows[1:]


class TestEvaluateSimple:
    def setup_method(self):
        discrete = FilteredSpace(("a", "b"), (H, H), ("1", "2"), ([["a"], ["b"]],) * 2)
        self.f = SimplePredictable(discrete, ["1", "2"], [(3, 5)])

    def test_lookup(self):
        assert evaluate_simple(self.f, "a", "2") == 3

    def test_left_endpoint_is_excluded(self):
        assert evaluate_simple(self.f, "a", "1") == 0

    def test_coefficients_must_be_measurable(self):
        with pytest.raises(NotAdaptedError):
            SimplePredictable(three_index_space(), ["1", "2"], [(3, 5)])

    def test_unknown_outcome(self):
        with pytest.raises(LabelError):
            evaluate_simple(self.f, "z", "2")


def test_cut_parse():
    assert Cut.parse("1, 2,3").labels == ("1", "2", "3")
    with pytest.raises(LabelError):
        Cut.parse("")


@given(spaces(max_indices=5), st.data())
def test_refinement_consistency(space, data):
    """Projecting a lifted simple integrand on a finer cut changes nothing
    on the coarse grid."""
    fine = sorted(data.draw(st.sets(st.integers(0, space.horizon - 1), min_size=1)))
    coarse = sorted(data.draw(st.sets(st.sampled_from(fine), min_size=1)))
    label = lambda pos: [space.indices[t] for t in pos]  # noqa: E731
    U = PathFunction(
        space,
        tuple(
            tuple(data.draw(rationals) for _ in range(space.size)) for _ in range(space.horizon)
        ),
    )
    f = project_simple(space, U, label(coarse))
    g = project_simple(space, f.to_path(), label(fine))
    for t in range(coarse[0] + 1, coarse[-1] + 1):
        for i in range(space.size):
            assert g.value_at(i, t) == f.value_at(i, t)
