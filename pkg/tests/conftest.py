import os

import pytest

from geometry.plane import plane_of_order


def pytest_collection_modifyitems(config, items):
    if os.getenv("RUN_EXTENDED", "").lower() in ("1", "true", "yes"):
        return
    skip = pytest.mark.skip(reason="hours-scale certification, set RUN_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def plane():
    """plane(q) -> PG(2,q), built once per session."""
    return plane_of_order


@pytest.fixture(scope="session")
def fano():
    return plane_of_order(2)


@pytest.fixture(scope="session")
def pg3():
    return plane_of_order(3)


@pytest.fixture(scope="session")
def pg4():
    return plane_of_order(4)


@pytest.fixture(scope="session")
def pg9():
    return plane_of_order(9)
