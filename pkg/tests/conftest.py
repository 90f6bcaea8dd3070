import numpy as np
import pytest
from hypothesis import strategies as st

from slassess.opinion import EvidenceView, from_evidence


def random_evidence_opinion(rng, k, base_rate=None, max_evidence=50.0):
    """Non-dogmatic opinion built from uniformly drawn evidence."""
    if base_rate is None:
        base_rate = rng.dirichlet(np.ones(k))
    r = rng.uniform(0.0, max_evidence, size=k)
    return from_evidence(EvidenceView(r, base_rate))


def random_opinion(rng, k, base_rate=None, dogmatic=False):
    """Opinion with belief/uncertainty drawn uniformly from the simplex."""
    if base_rate is None:
        base_rate = rng.dirichlet(np.ones(k))
    mass = rng.dirichlet(np.ones(k + 1))
    if dogmatic:
        mass[-1] = 0.0
        mass /= mass.sum()
    from slassess.opinion import Opinion

    return Opinion(mass[:k], mass[k], base_rate)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@st.composite
def opinions(draw, k=None, base_rate=None, min_u=0.0):
    """Hypothesis strategy for valid opinions."""
    from slassess.opinion import Opinion

    if k is None:
        k = draw(st.integers(2, 6))
    weights = draw(
        st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=k + 1, max_size=k + 1)
    )
    w = np.asarray(weights) + 1e-3
    w /= w.sum()
    u = max(w[-1], min_u)
    b = w[:k] / w[:k].sum() * (1.0 - u)
    if base_rate is None:
        a = np.asarray(
            draw(st.lists(st.floats(0.01, 1.0), min_size=k, max_size=k))
        )
        base_rate = a / a.sum()
    return Opinion(b, u, base_rate)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
