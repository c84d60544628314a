import os

import pytest

from hmiv.dsl import load_document

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "hmiv", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.normpath(os.path.join(FIXTURE_DIR, name))


@pytest.fixture(scope="session")
def fcu_doc():
    result = load_document(fixture_path("fcu.hmi"))
    assert result.ok, [d.render() for d in result.diagnostics]
    return result.document


@pytest.fixture(scope="session")
def fcu_model(fcu_doc):
    return fcu_doc.statechart("fcu")


@pytest.fixture(scope="session")
def fcu_net(fcu_doc):
    return fcu_doc.net("barometer")


@pytest.fixture(scope="session")
def fcu_taskmodel(fcu_doc):
    return fcu_doc.taskmodel("descent_prep")


@pytest.fixture(scope="session")
def fcu_binding(fcu_doc, fcu_taskmodel, fcu_model):
    from hmiv import coexec as cx
    return cx.bind(fcu_doc.correspondences[0], fcu_taskmodel, fcu_model)
