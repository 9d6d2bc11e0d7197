import numpy as np
import pytest

from modules.gf import make_field
from modules.linear_code import LinearCode
from modules.parallel import ScanOptions

TERNARY_14_4 = [
    [0, 0, 0, 0, 0, 0, 0, 1, 2, 1, 1, 1, 2, 1],
    [1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 2, 1, 1],
    [0, 1, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0, 2, 2],
    [0, 0, 0, 0, 1, 2, 1, 1, 1, 0, 0, 0, 1, 2],
]

BINARY_27_6 = [
    [int(b) for b in row]
    for row in (
        "110000000110110000101101000",
        "011000000011011000011011000",
        "000110000110000110011000101",
        "000011000011000011110000011",
        "000000110000110110000011011",
        "000000011000011011000110110",
    )
]


@pytest.fixture
def gf2():
    return make_field(2)


@pytest.fixture
def gf3():
    return make_field(3)


@pytest.fixture
def gf4():
    return make_field(2, 2)


@pytest.fixture
def gf9():
    return make_field(3, 2)


@pytest.fixture
def small_chunks():
    """Tiny blocks on two threads, so every scan crosses block boundaries."""
    return ScanOptions(threads=2, chunk_size=7)


@pytest.fixture
def ternary_code(gf3):
    return LinearCode.from_rows(gf3, TERNARY_14_4)


@pytest.fixture
def binary_code(gf2):
    return LinearCode.from_rows(gf2, BINARY_27_6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def isolated_settings(tmp_path, monkeypatch):
    """Run in a scratch directory so the settings file never touches the checkout."""
    monkeypatch.chdir(tmp_path)
    return tmp_path
