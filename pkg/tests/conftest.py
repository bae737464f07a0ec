
import numpy as np
import pytest
from hypothesis import HealthCheck, assume, settings
from hypothesis import strategies as st

from phsusy import core
from phsusy.errors import DegenerateError, InvalidParams

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DEFAULT = core.ModelParams(2.0, 1.0, 0.5)


def _point(w, a, b, z):
    try:
        p = core.ModelParams(w, a, b)
        x = core.arctanh_argument(p, z)
    except (InvalidParams, DegenerateError):
        return None
    if abs(x) > 0.99 or core.omega_cap(p) < 0.1:
        return None
    return p, z


@st.composite
def valid_points(draw):
    """(ModelParams, z) from the sampling ranges used by the CLI."""
    w = draw(st.floats(0.5, 4.0))
    a = draw(st.floats(-2.0, 2.0))
    b = draw(st.floats(-2.0, 2.0))
    z = draw(st.floats(-3.0, 3.0))
    pt = _point(w, a, b, z)
    assume(pt is not None)
    return pt


def max_abs(m):
    return float(np.max(np.abs(m)))


@pytest.fixture
def default_point():
    return DEFAULT, 0.0


# criterion number -> (title, passed); filled by the acceptance tests
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
