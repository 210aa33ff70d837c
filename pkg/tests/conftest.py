"""Test configuration and fixtures for pytest."""
import numpy as np
import pytest

from services.chart_service import ChartService
from services.classification_service import ClassificationService
from services.enrichments import enrichment_from_name
from services.settings import DEFAULT_SETTINGS, get_settings


@pytest.fixture(scope="session")
def settings():
    """Default workbench settings."""
    return DEFAULT_SETTINGS


@pytest.fixture(scope="session")
def classification_service(settings):
    """One service per session so the model saturations are computed once."""
    return ClassificationService(settings)


@pytest.fixture(scope="session")
def chart_service(settings):
    return ChartService(settings)


@pytest.fixture
def rng():
    """Seeded generator; every test gets a fresh stream."""
    return np.random.default_rng(get_settings(seed=7).seed)


@pytest.fixture
def named():
    """Shorthand for building enrichments from R-notation."""
    def build(text, n=3):
        return enrichment_from_name(text, n)
    return build
