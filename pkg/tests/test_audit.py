import numpy as np

from qcorr import audit, geometric
from qcorr.core import is_physical


def test_all_suites_pass_small():
    report = audit.run_verification(3, 500)
    assert report["passed"]
    for name, suite in report["suites"].items():
        assert suite["failed"] == 0, name
        assert set(suite) >= {"checked", "failed", "first_failure_state", "max_violation"}


def test_tie_conditioned_states():
    ties = audit.tie_conditioned(0, 20)
    assert np.all(is_physical(ties))
    for c in np.abs(ties):
        assert len(set(np.round(c, 15))) < 3


def test_classical_quantum_projection_has_no_discord():
    cs = audit.classical_quantum(np.array([[0.5, -0.4, 0.3], [0.1, 0.2, -0.6]]))
    assert cs.tolist() == [[0.5, 0.0, 0.0], [0.0, 0.0, -0.6]]


def test_fault_is_reported(monkeypatch):
    def flipped(c):
        m = geometric.order_magnitudes(geometric.require_physical(c))
        return 0.5 * (m.c_plus + np.minimum(m.c_plus, m.c_mid + m.c_minus))

    monkeypatch.setattr(geometric, "t_g_closed", flipped)
    report = audit.run_verification(0, 200)
    assert not report["passed"]
    suite = report["suites"]["t_g_dual_path"]
    assert suite["failed"] > 0 and len(suite["first_failure_state"]) == 3
