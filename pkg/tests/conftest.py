import pytest

from pxtmesh.graph import UNBOUNDED, Graph
from pxtmesh.topologies import standard_topology


@pytest.fixture(scope="session")
def icosahedron():
    return standard_topology("icosahedron")


@pytest.fixture(scope="session")
def k66():
    return standard_topology("k66")


@pytest.fixture(scope="session")
def grid3x4():
    return standard_topology("grid3x4")


@pytest.fixture(scope="session")
def tietze():
    return standard_topology("tietze")


@pytest.fixture(scope="session")
def cycle12plus3():
    return standard_topology("cycle12plus3")


@pytest.fixture
def five_node():
    """The two-triangle example network: A-B and C-D have direct links, with
    E bridging both triangles (links AB, CD, CA, AE, EB, ED, DB)."""
    return Graph("ABCDE", [
        ("A", "B", UNBOUNDED),
        ("C", "D", UNBOUNDED),
        ("C", "A", UNBOUNDED),
        ("A", "E", UNBOUNDED),
        ("E", "B", UNBOUNDED),
        ("E", "D", UNBOUNDED),
        ("D", "B", UNBOUNDED),
    ])


@pytest.fixture
def multigraph():
    """Five-node multigraph with a doubled D-E link (named edges a..f in tests)."""
    return Graph("ABCDE", [
        ("A", "B", 2),
        ("B", "C", 2),
        ("B", "D", 2),
        ("C", "D", 2),
        ("D", "E", 2),
    ])
