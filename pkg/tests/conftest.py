import pytest

from sasplan import load_sas

from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def chain_task():
    return load_sas(FIXTURES / "chain.sas")


@pytest.fixture(scope="session")
def pair_task():
    return load_sas(FIXTURES / "pair.sas")


@pytest.fixture(scope="session")
def conditional_task():
    return load_sas(FIXTURES / "conditional.sas")


@pytest.fixture(scope="session")
def unsolvable_task():
    return load_sas(FIXTURES / "chain-unsolvable.sas")
