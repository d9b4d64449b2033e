from pathlib import Path

import numpy as np
import pytest

from mcspred.config import set_config
from mcspred.core import default_rate_table

FIXTURES = Path(__file__).parent / 'fixtures'

# 22,22,22,22,22,27,27,24,24,22,24,27,24,24,22
EXAMPLE_SYMBOLS = (22, 22, 22, 22, 22, 27, 27, 24, 24, 22, 24, 27, 24, 24, 22)


@pytest.fixture(autouse=True)
def defconfig(monkeypatch, tmp_path_factory):
    for key in ('MCSPRED_CONFIG', 'MCSPRED_OUTPUT_DIR', 'MCSPRED_WORKERS', 'MCSPRED_SEED',
                'MCSPRED_LOG_PREDICTIONS'):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.setattr(
        'mcspred.config.local_config_path', tmp_path_factory.mktemp('user-config'),
    )
    set_config(None)
    yield
    set_config(None)


@pytest.fixture
def example_trace_path():
    return FIXTURES / 'example_trace.csv'


@pytest.fixture
def example_symbols():
    return EXAMPLE_SYMBOLS


@pytest.fixture
def lezi_golden():
    return (FIXTURES / 'lezi_example_tree.txt').read_text()


@pytest.fixture
def rates28():
    return default_rate_table(28)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
