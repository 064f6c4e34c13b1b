import json
import math

import numpy as np
import pytest

from dynscatter import config as settings
from dynscatter.cli import main
from dynscatter.design import design
from dynscatter.models.design_spec import DesignGoal, DesignSpec
from dynscatter.numerics import IntegratorConfig
from dynscatter.potential import barrier, modulated_exponential


@pytest.fixture
def cfg():
    """Integrator settings used across the suite."""
    return IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def real_barrier():
    return barrier(2.5, 1.5)


@pytest.fixture
def complex_barrier():
    return barrier(-1.2 + 0.7j, 2.0, offset=-0.4)


@pytest.fixture
def exp_potential():
    return modulated_exponential(0.04, 1.0, math.pi / 3)


@pytest.fixture(scope="session")
def invisible_design():
    """Right-invisible design with k0 L = 3 pi (built once; designs are immutable)."""
    return design(DesignSpec.from_k0L(3 * math.pi, DesignGoal.RIGHT_INVISIBLE, gamma=1e-6))


@pytest.fixture(scope="session")
def lasing_design():
    return design(DesignSpec.from_k0L(3 * math.pi / 4, DesignGoal.LASING))


@pytest.fixture
def quiet_threads(monkeypatch):
    """Keep sweeps single-threaded so failures are reproducible."""
    monkeypatch.setattr(settings, "THREADS", 1)


@pytest.fixture
def run_cli(capsys):
    """Run the CLI in-process and return (exit status, stdout, stderr)."""
    def _run(*argv):
        code = main([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return _run


@pytest.fixture
def envelope_of():
    """Parse the envelope out of captured output (log lines may surround it)."""
    def _parse(text):
        lines = text.splitlines()
        start = lines.index("{")
        end = lines.index("}", start)
        return json.loads("\n".join(lines[start:end + 1]))
    return _parse


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the whole cross-check suite")
