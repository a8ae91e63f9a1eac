"""
Shared fixtures: small groups, a seeded RNG and the testing configuration
"""
import os
import random

import pytest

os.environ.setdefault('HOMFORGE_ENV', 'testing')

from config import RunConfig, TestingConfig  # noqa: E402
from modules.barhomology import config as bar_config  # noqa: E402
from modules.core import factorization_cache, homology_cache, model_cache  # noqa: E402
from modules.groups import FiniteAbelianGroup, cyclic, torus_with_weyl  # noqa: E402
from modules.groups import config as group_config  # noqa: E402

LIBRARY_SETTINGS = (
    (group_config, ('CONSTRUCTION_CAP',)),
    (bar_config, ('BAR_CELL_CAP', 'BAR_GROUP_CAP', 'REFUTE_PRIMES', 'REFUTE_THRESHOLD')),
)


@pytest.fixture
def rng():
    return random.Random(7)


@pytest.fixture
def run_config():
    return RunConfig.from_env(TestingConfig)


@pytest.fixture
def klein():
    return FiniteAbelianGroup((2, 2))


@pytest.fixture
def z6():
    return cyclic(6)


@pytest.fixture(scope='session')
def order32():
    """Diagonal torus of GL2(F5) extended by the coordinate swap"""
    return torus_with_weyl(5, 2)


@pytest.fixture(autouse=True, scope='module')
def fresh_caches():
    for cache in (factorization_cache, homology_cache, model_cache):
        cache.clear()
    yield


@pytest.fixture(autouse=True)
def library_settings(monkeypatch):
    """RunConfig.apply() writes module-level caps; undo it after every test"""
    for module, names in LIBRARY_SETTINGS:
        for name in names:
            monkeypatch.setattr(module, name, getattr(module, name))
    yield
