import pytest

from latcon import utils
from latcon.config import Settings
from latcon.construct import s8_gadget
from latcon.serialization import parse_lattice, parse_poset

DEFAULT_SWEEP = 7


def pytest_addoption(parser):
    parser.addoption(
        "--sweep-size",
        type=int,
        default=None,
        help="Largest lattice size for the exhaustive sweeps (acceptance runs use 10).",
    )


@pytest.fixture(scope="session")
def sweep_size(request) -> int:
    return request.config.getoption("--sweep-size") or DEFAULT_SWEEP


@pytest.fixture
def settings(tmp_path) -> Settings:
    return Settings(cache_dir=tmp_path / "cache")


def load_fixture_poset(name: str):
    return parse_poset(utils.read_data(name))


@pytest.fixture
def fig1():
    return load_fixture_poset("fig1-right.poset")


@pytest.fixture
def fig3():
    return load_fixture_poset("fig3.poset")


@pytest.fixture
def two_chain():
    return load_fixture_poset("2chain.poset")


@pytest.fixture
def s7_embedding():
    return parse_lattice(utils.read_data("s7.lattice.json")).embedding


@pytest.fixture
def s8():
    return s8_gadget()
