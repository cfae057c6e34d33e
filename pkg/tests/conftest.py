import json
from pathlib import Path

import pytest
import structlog
from hypothesis import HealthCheck, settings

from polarize.norms.schema import parse_descriptor

DATA_DIR = Path(__file__).parent / 'data'
NORMS_DIR = DATA_DIR / 'norms'

settings.register_profile(
    'polarize',
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    'polarize-slow',
    parent=settings.get_profile('polarize'),
    # seven families, so every property sees more than 10 000 instances
    max_examples=1500,
)
settings.load_profile('polarize')


def norm_fixture_path(name: str) -> Path:
    return NORMS_DIR / f'{name}.json'


@pytest.fixture
def norm_path():
    return norm_fixture_path


@pytest.fixture
def load_norm():
    def load(name: str):
        with norm_fixture_path(name).open('r', encoding='utf-8') as handle:
            return parse_descriptor(json.load(handle))

    return load


@pytest.fixture
def sup_norm(load_norm):
    return load_norm('sup_c2')


@pytest.fixture
def l1_norm(load_norm):
    return load_norm('l1_c2')


@pytest.fixture
def l2_norm(load_norm):
    return load_norm('l2_c2')


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    structlog.reset_defaults()
