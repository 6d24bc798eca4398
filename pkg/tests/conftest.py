import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from esdg.euler import conservative

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_states(rng, shape, d, rho=(0.2, 5.0), vel=2.0, p=(0.2, 5.0)):
    """Random admissible conservative states with the given leading shape."""
    r = rng.uniform(*rho, size=shape)
    v = rng.uniform(-vel, vel, size=shape + (d,))
    pr = rng.uniform(*p, size=shape)
    return conservative(r, v, pr)


@st.composite
def admissible_state(draw, d):
    rho = draw(st.floats(0.05, 20.0))
    vel = [draw(st.floats(-5.0, 5.0)) for _ in range(d)]
    p = draw(st.floats(0.05, 20.0))
    return conservative(rho, np.array(vel), p)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance verdicts, printed once at the end of the session
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
