import json
from pathlib import Path

import pytest

from hedrop.heprops import load_isotope
from hedrop.modes import Drop

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def he4():
    return load_isotope("He4")


@pytest.fixture(scope="session")
def he3():
    return load_isotope("He3")


@pytest.fixture(scope="session")
def drop4(he4):
    return Drop(he4, 1e-3, 0.3)


@pytest.fixture(scope="session")
def drop3(he3):
    return Drop(he3, 1e-3, 0.13)


@pytest.fixture(scope="session")
def oracle():
    return json.loads((GOLDEN / "oracle_values.json").read_text())
