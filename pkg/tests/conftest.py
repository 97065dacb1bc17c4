"""
Fixtures compartilhadas da suíte.
"""

import pytest
from click.testing import CliRunner
from loguru import logger

from src.core.config import Settings, use_settings
from src.domain import fixtures


@pytest.fixture(autouse=True)
def isolated_settings():
    """Configurações padrão em cada teste, sem .env e sem sinks pendurados"""
    settings = Settings(_env_file=None)
    use_settings(settings)
    yield settings
    use_settings(None)
    logger.remove()


@pytest.fixture
def heteroclinic():
    return fixtures.heteroclinic()


@pytest.fixture
def eps_field():
    return fixtures.eps_field()


@pytest.fixture
def quartic_rotation():
    return fixtures.quartic_rotation()


@pytest.fixture
def quadratic():
    return fixtures.quadratic()


@pytest.fixture
def degenerate_circle():
    return fixtures.degenerate(-1.0, 0.0, -1.0)


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


