import pytest
from hypothesis import settings

# wall-clock deadlines are flaky when the whole suite loads the machine
settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


def pytest_addoption(parser):
    parser.addoption(
        "--run-long",
        action="store_true",
        default=False,
        help="run tests marked long (the n=4 census)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-long"):
        return
    skip = pytest.mark.skip(reason="needs --run-long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)
