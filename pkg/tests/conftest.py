from pathlib import Path

import pytest

from config import Config, ToleranceConfig
from model.catalog import cycle_laplacian, four_state_generator, rotation_generator

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def tol() -> ToleranceConfig:
    return ToleranceConfig()


@pytest.fixture
def config() -> Config:
    return Config()


@pytest.fixture
def four_state():
    return four_state_generator()


@pytest.fixture
def rotation():
    return rotation_generator()


@pytest.fixture
def cycle3():
    return cycle_laplacian(3)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
