"""Global fixtures and setup code for the test suite."""
import sys
import pathlib
import pytest
import repobee

from repobee_sepchoose import _catalog, _fileutils, _generators

sys.path.append(str(pathlib.Path(__file__).parent / "helpers"))


@pytest.fixture(autouse=True)
def unregister_plugins():
    """Fixture that automatically unregisters all plugins after each test
    function. This is important for the end-to-end tests.
    """
    repobee.unregister_all_plugins()


@pytest.fixture
def c5():
    return _generators.cycle(5)


@pytest.fixture
def petersen():
    return _generators.named_fixture("petersen")


@pytest.fixture
def graph_file(tmpdir):
    """Returns a function that writes a graph in edge-list format to the
    temporary directory and returns its path.
    """

    def _write(g, name="graph.txt"):
        path = pathlib.Path(tmpdir) / name
        _fileutils.write_edge_list(g, path)
        return path

    return _write


@pytest.fixture(scope="session")
def small_graphs():
    """Every graph on 1 to 7 vertices, one per isomorphism class."""
    return _catalog.atlas_graphs(7, connected_only=False)
