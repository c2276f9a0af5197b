"""
Shared fixtures: the named algebras and their extensions are built once per module.
"""
from pathlib import Path

import pytest

from heyting_completion.algebra.extension import build_extension
from heyting_completion.corpus import fixtures

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "heyting_completion" / "data" / "fixtures"


@pytest.fixture(scope="module")
def named():
    return fixtures()


@pytest.fixture(scope="module")
def l5(named):
    return named["L5"]


@pytest.fixture(scope="module")
def c3(named):
    return named["C3"]


@pytest.fixture(scope="module")
def c4(named):
    return named["C4"]


@pytest.fixture(scope="module")
def b4(named):
    return named["B4"]


@pytest.fixture(scope="module")
def l5_extension(l5):
    return build_extension(l5)


@pytest.fixture(scope="module")
def fixture_dir():
    return FIXTURE_DIR
