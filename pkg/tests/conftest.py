import sys

import pytest

from selfsearch.indexing import Document, IndexWriter
from selfsearch.storage import StorageConfig, open_storage

TOY_DOCS = [
    Document("d0", "a b a"),
    Document("d1", "a c"),
    Document("d2", "c c"),
]


@pytest.fixture(params=["memory", "lsm"])
def backend(request):
    return request.param


@pytest.fixture
def make_storage(backend, tmp_path_factory):
    """Factory for fresh storage handles of the parametrized backend.

    Every call opens a new empty store (new directory for lsm). Handles
    are closed at teardown unless the test already closed them.
    """
    handles = []

    def factory(**overrides):
        if backend == "memory":
            config = StorageConfig(backend="memory", **overrides)
        else:
            data_dir = str(tmp_path_factory.mktemp("store"))
            config = StorageConfig(data_dir=data_dir, backend="lsm", **overrides)
        handle = open_storage(config)
        handles.append(handle)
        return handle

    yield factory
    for handle in handles:
        try:
            handle.close()
        except Exception:
            pass


@pytest.fixture
def lsm_dir(tmp_path):
    return str(tmp_path / "store")


@pytest.fixture
def toy_index(make_storage):
    storage = make_storage()
    IndexWriter(storage).build(list(TOY_DOCS))
    return storage


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Repeat the acceptance verdict lines after the tally.

    Passing tests have their stdout captured, so without this the
    per-criterion lines would only surface on failure.
    """
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None) if mod else None
    if results:
        terminalreporter.section("acceptance")
        for line in results:
            terminalreporter.write_line(line)
