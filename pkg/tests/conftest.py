import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from llmcdg.bench import corpus  # noqa: E402
from llmcdg.sim import load_design  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def designs():
    """Every corpus design, elaborated once per session."""
    return {spec.id: spec.load() for spec in corpus()}


@pytest.fixture
def make_design():
    def _make(text, path="t.v"):
        return load_design(text, path)
    return _make
