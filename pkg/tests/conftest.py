import os
import sys

import pytest

# 添加项目根目录到Python路径
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from app.main import create_app
from witness.common.random_source import stream_generator
from witness.gaussian.spdc import SpdcConfig
from witness.qubit.states import bell_phi_plus, classical_correlated


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="运行验收规模的慢测试")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 验收规模的慢测试，需 --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def app():
    app = create_app()
    app.config["TESTING"] = True
    return app


@pytest.fixture
def phi_plus():
    return bell_phi_plus()


@pytest.fixture
def rho_cl():
    return classical_correlated()


@pytest.fixture
def rng():
    return stream_generator(12345, 0)


@pytest.fixture
def spdc_cfg():
    return SpdcConfig(w=1e-3, L=2e-3, wavelength=405e-9, alpha=0.455)

