import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qcorr.core import TETRAHEDRON

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def physical_states(draw):
    """Points of the tetrahedron as convex combinations of its vertices."""
    w = np.array([draw(st.floats(0.0, 1.0)) for _ in range(4)])
    if w.sum() == 0.0:
        w[0] = 1.0
    return (w / w.sum()) @ TETRAHEDRON


@st.composite
def hermitian_4x4(draw):
    vals = st.floats(-5.0, 5.0, allow_nan=False)
    re = np.array([[draw(vals) for _ in range(4)] for _ in range(4)])
    im = np.array([[draw(vals) for _ in range(4)] for _ in range(4)])
    a = re + 1j * im
    return (a + a.conj().T) / 2


ACCEPTANCE = {}


def record(number, title, ok, detail=""):
    """Store a criterion outcome for the summary and echo it to stdout."""
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
