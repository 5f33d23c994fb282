import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from mixbelief import make_game  # noqa: E402

settings.register_profile("repo", max_examples=40, deadline=None)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def ld2():
    """The 1 die / 2 faces instance used as the running example."""
    return make_game("liars_dice", faces=2)


@pytest.fixture(scope="session")
def ld3():
    return make_game("liars_dice", faces=3)


@pytest.fixture(scope="session")
def leduc():
    return make_game("leduc")


@pytest.fixture(scope="session")
def trick_small():
    return make_game("trick", cards=6, hidden=2, suits=2)
