from __future__ import annotations

import pathlib

import pytest

from th4.ingest import load_dataset
from th4.tables import build_table

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def golden4_path():
    return DATA / "golden4.txt"


@pytest.fixture(scope="session")
def golden3_path():
    return DATA / "golden3.txt"


@pytest.fixture(scope="session")
def golden4(golden4_path):
    return load_dataset(golden4_path)


@pytest.fixture(scope="session")
def golden3(golden3_path):
    return load_dataset(golden3_path)


@pytest.fixture(scope="session")
def golden4_table(golden4):
    return build_table(golden4)


@pytest.fixture(scope="session")
def golden3_table(golden3):
    return build_table(golden3)
