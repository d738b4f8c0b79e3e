import pytest

from classmarks.service import Application, HttpRequest, ServiceConfig
from classmarks.store import DatasetTier

from . import support


@pytest.fixture(scope="session")
def snapshot():
    return support.sample_snapshot()


@pytest.fixture(scope="session")
def base_uri():
    return support.BASE_URI


@pytest.fixture()
def app(snapshot):
    config = ServiceConfig(base_uri=support.BASE_URI,
                           keys={"full-key": DatasetTier.FULL,
                                 "abridged-key": DatasetTier.ABRIDGED})
    return Application(config, snapshot)


@pytest.fixture()
def client(app):
    def get(target, **headers):
        return app.handle(HttpRequest.from_target("GET", target, headers))
    return get
