from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from quasimart.fixtures import fixtures
from quasimart.verify import KINDS, GenParams, gen_process, gen_space, gen_subfiltration

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, line = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {line}")


@pytest.fixture
def acceptance(request):
    """Record one summary line per acceptance criterion."""
    store = request.config.stash[ACCEPTANCE_KEY]

    def record(number, ok, line):
        store[number] = (ok, line)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {line}")

    return record


@pytest.fixture
def fx():
    return fixtures()


@st.composite
def gen_params(draw, max_outcomes=6, max_indices=4):
    return GenParams(
        seed=draw(st.integers(0, 2**32 - 1)),
        num_outcomes=draw(st.integers(1, max_outcomes)),
        num_indices=draw(st.integers(1, max_indices)),
    )


@st.composite
def spaces(draw, **kw):
    return gen_space(draw(gen_params(**kw)))


@st.composite
def processes(draw, kinds=KINDS, **kw):
    p = draw(gen_params(**kw))
    kind = draw(st.sampled_from(kinds))
    return gen_process(p, kind, gen_space(p))


@st.composite
def process_pairs(draw, **kw):
    """Two processes on a shared space."""
    p = draw(gen_params(**kw))
    space = gen_space(p)
    a, b = draw(st.sampled_from(KINDS)), draw(st.sampled_from(KINDS))
    return gen_process(p, a, space, "x"), gen_process(p, b, space, "y")


@st.composite
def with_subfiltration(draw, **kw):
    p = draw(gen_params(**kw))
    space = gen_space(p)
    kind = draw(st.sampled_from(KINDS))
    return gen_process(p, kind, space), gen_subfiltration(p, space)


rationals = st.fractions(min_value=-8, max_value=8, max_denominator=8).map(Fraction)
