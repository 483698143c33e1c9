"""Pytest configuration and shared fixtures."""

import random

import pytest
from unittest.mock import patch

from agr.groups import grigorchuk, gupta_sidki


@pytest.fixture(autouse=True)
def suppress_banners():
    """Automatically suppress banner output in all tests."""
    with patch('agr.main.display_header'), \
         patch('agr.main.display_step_separator'), \
         patch('agr.main.display_completion_banner'):
        yield


@pytest.fixture
def grig():
    return grigorchuk()


@pytest.fixture
def gs():
    return gupta_sidki()


@pytest.fixture
def gens(grig):
    """Grigorchuk generators a, b, c, d and the identity e."""
    elements = grig.environment()
    elements["e"] = grig.identity()
    return elements


@pytest.fixture
def rng():
    return random.Random(20240601)
