import numpy as np
import pytest
from hypothesis import strategies as st

from dsmaps.model import BirkhoffParams, WMatrix

PERMS = [np.eye(3)[list(p)] for p in ((0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0))]


@st.composite
def ds_matrices(draw, min_w=0.5, max_w=6.0):
    """Scaled doubly stochastic W as a weighted sum of permutation matrices."""
    weights = draw(st.lists(st.floats(0.0, 1.0), min_size=6, max_size=6).filter(lambda v: sum(v) > 1e-3))
    scale = draw(st.floats(min_w, max_w))
    m = sum(wt * p for wt, p in zip(weights, PERMS))
    return WMatrix(scale * m / m.sum(axis=1)[0])


@st.composite
def birkhoff_params(draw, a=(0.5, 3.5), bc=(0.0, 2.0), spread=1.0):
    aa = draw(st.floats(*a))
    b = draw(st.floats(*bc))
    c = draw(st.floats(*bc))
    d = draw(st.floats(-spread, spread))
    e = draw(st.floats(-spread, spread))
    p = BirkhoffParams(aa, b, c, d, e, -d - e)
    from hypothesis import assume
    assume(np.all(p.entries() >= 0.0))
    return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def choi_w():
    return WMatrix.from_circulant(2, 1, 0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
