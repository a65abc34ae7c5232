import json
import os

import networkx as nx
import pytest

from utils import graph_core
from utils.splitting import splitting_from_json

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SAMPLES = os.path.join(ROOT, "samples")


def sample_path(name):
    return os.path.join(SAMPLES, name)


@pytest.fixture
def samples_dir():
    return SAMPLES


@pytest.fixture
def broom():
    """Vertex 1 joined to 2..7, vertex 7 joined to 8 and 9."""
    return graph_core.make_graph(9, [(1, k) for k in range(2, 8)] + [(7, 8), (7, 9)])


@pytest.fixture
def broom_split():
    """The splitting of the broom into K_{1,5} and K_{1,3}."""
    with open(sample_path("broom_split.json"), encoding="utf-8") as handle:
        return splitting_from_json(json.load(handle))


@pytest.fixture
def p3():
    return graph_core.path_graph(3)


@pytest.fixture
def two_k2():
    return graph_core.make_graph(4, [(1, 2), (3, 4)])


@pytest.fixture
def c4():
    return graph_core.cycle_graph(4)


def atlas_graphs(max_n=7):
    """Every graph on at most ``max_n`` ≤ 7 vertices, one per isomorphism class."""
    return [
        graph_core.make_graph(g.number_of_nodes(), [(u + 1, v + 1) for u, v in g.edges()])
        for g in nx.graph_atlas_g()
        if g.number_of_nodes() <= max_n
    ]


@pytest.fixture(scope="session")
def small_graphs():
    return atlas_graphs()
