import pytest

from matching_application.app import create_app
from matching_application.dynamic_matching.utils.workload import UpdateSequence, save

from helpers import make_engine


@pytest.fixture
def engine():
    """Engine on 8 vertices with the default threshold (3)"""
    return make_engine(8)


@pytest.fixture
def app():
    return create_app('testing')


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def sequence_file(tmp_path):
    """Write an UpdateSequence to a temp file and return its path"""
    def _write(seq: UpdateSequence, name='seq.txt'):
        path = tmp_path / name
        save(seq, path)
        return path
    return _write
