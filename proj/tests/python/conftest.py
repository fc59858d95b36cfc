import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def data_dir():
    return ROOT / "data"


@pytest.fixture(scope="session")
def schema_dir():
    return ROOT / "schemas"


@pytest.fixture(scope="session")
def qmlkit_bin():
    path = os.environ.get("QMLKIT_BIN")
    if not path:
        pytest.skip("QMLKIT_BIN is not set")
    return path
