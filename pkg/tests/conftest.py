import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from corrfunctor.relations import Correspondence

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def correspondences(draw, target=None, source=None, max_size=3):
    y = draw(st.integers(0, max_size)) if target is None else target
    x = draw(st.integers(0, max_size)) if source is None else source
    rows = tuple(draw(st.integers(0, (1 << x) - 1)) for _ in range(y))
    return Correspondence(y, x, rows)


@st.composite
def composable_triple(draw, max_size=3):
    a, b, c, d = (draw(st.integers(0, max_size)) for _ in range(4))
    u = draw(correspondences(b, a))
    v = draw(correspondences(c, b))
    w = draw(correspondences(d, c))
    return w, v, u


def pair_set(u):
    return {(y, x) for y in range(u.target) for x in range(u.source) if (y, x) in u}


def brute_compose(v, u):
    """Relational product straight from the existential definition."""
    pv, pu = pair_set(v), pair_set(u)
    return {(z, x) for (z, y) in pv for (y2, x) in pu if y == y2}


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
