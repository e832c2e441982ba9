import pytest


def pytest_addoption(parser):
    parser.addoption("--allow-slow", action="store_true", default=False,
                     help="run tests marked slow (deep refinements, d = 3 at m = 2)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--allow-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --allow-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
