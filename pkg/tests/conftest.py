from __future__ import annotations

import pytest

from symgame.documents import load_fixture
from symgame.services.game import Game
from symgame.services.param_games import generic_assignment, instantiate
from symgame.services.registry import get_family


def family_game(family: str, set_name: str | None = None) -> Game:
    partition = get_family(family).partition(set_name)
    return instantiate(partition, generic_assignment(partition))


@pytest.fixture
def example_2_1() -> Game:
    return load_fixture("example_2_1")


@pytest.fixture
def example_3_1() -> Game:
    return load_fixture("example_3_1")


@pytest.fixture
def example_3_2() -> Game:
    return load_fixture("example_3_2")


@pytest.fixture
def example_3_3() -> Game:
    return load_fixture("example_3_3")


@pytest.fixture
def example_3_6() -> Game:
    return load_fixture("example_3_6")


@pytest.fixture
def matching_pennies() -> Game:
    return load_fixture("matching_pennies")


@pytest.fixture
def gamma1() -> Game:
    return load_fixture("example_4_2_gamma1")


@pytest.fixture
def gamma2() -> Game:
    return load_fixture("example_4_2_gamma2")


@pytest.fixture
def rock_paper_scissors() -> Game:
    return load_fixture("rock_paper_scissors")


@pytest.fixture
def example_5_5() -> Game:
    return family_game("example_5_5")


@pytest.fixture(scope="session")
def example_5_11() -> Game:
    return load_fixture("example_5_11")
