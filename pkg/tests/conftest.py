import pytest

from app.config import get_settings
from app.core.fixtures import c3c3_embedding, c5c5_embedding


@pytest.fixture(autouse=True)
def checkpoint_dir(tmp_path, monkeypatch):
    """Keep default checkpoints out of the working tree."""
    directory = tmp_path / "checkpoints"
    monkeypatch.setenv("CHECKPOINT_DIR", str(directory))
    get_settings.cache_clear()
    yield directory
    get_settings.cache_clear()


@pytest.fixture
def c3c3():
    return c3c3_embedding()


@pytest.fixture
def c5c5():
    return c5c5_embedding()
