import numpy as np
import pytest

from citecascade import Publication, build_graph


def make_graph(edges, years=None, codes=None, ids=None, mode="lenient"):
    """Small-graph helper: infer the node set from the edge list."""
    if ids is None:
        ids = sorted({node for edge in edges for node in edge})
    years = years or {}
    codes = codes or {}
    pubs = [
        Publication(i, years.get(i, 2000), frozenset(codes.get(i, ())))
        for i in ids
    ]
    graph, report = build_graph(pubs, edges, mode=mode)
    return graph


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
