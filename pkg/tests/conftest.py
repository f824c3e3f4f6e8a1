import json

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from projpencil.linalg_core import matrix_to_dict

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def write_json(tmp_path):
    def _write(name, obj):
        if isinstance(obj, np.ndarray):
            obj = matrix_to_dict(obj)
        elif hasattr(obj, "to_dict"):
            obj = obj.to_dict()
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return _write


def pencil_matrix(B, lam, kernel=(0, 0, 0, 0)):
    """``diag(0.., 1.., lam.., 1+lam..) (+) (c + B) (+) (c - B)``."""
    b = np.asarray(B, dtype=float)
    c = (1.0 + lam) / 2.0
    d0, d1, dl, d1l = kernel
    vals = [0.0] * d0 + [1.0] * d1 + [lam] * dl + [1.0 + lam] * d1l
    return np.diag(np.concatenate([vals, c + b, c - b])).astype(complex)
