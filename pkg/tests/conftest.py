import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import golden_trio_set, lime_shap_pair_set  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def golden_trio():
    return golden_trio_set()


@pytest.fixture
def lime_shap_pair():
    return lime_shap_pair_set()


@pytest.fixture
def golden_trio_path() -> Path:
    return FIXTURES / "golden_trio.xm"


@pytest.fixture
def lime_shap_pair_path() -> Path:
    return FIXTURES / "lime_shap_pair.xm"
