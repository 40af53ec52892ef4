import numpy as np
import pytest

from housegan.core import BubbleDiagram, RoomType
from housegan.dataio import CorpusConfig, synthesize_corpus


def random_diagram(rng: np.random.Generator, max_nodes: int = 6, edge_prob: float = 0.4) -> BubbleDiagram:
    n = int(rng.integers(1, max_nodes + 1))
    types = rng.integers(0, 10, size=n)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob]
    return BubbleDiagram(types, edges)


def random_permutation(rng: np.random.Generator, n: int) -> list[int]:
    return [int(v) for v in rng.permutation(n)]


@pytest.fixture(scope="session")
def small_corpus():
    config = CorpusConfig(counts={"1-3": 8, "4-6": 8, "7-9": 6, "10-12": 4, "13+": 3})
    return synthesize_corpus(config, seed=20_240)


@pytest.fixture(scope="session")
def square_layout():
    from housegan.core import Layout

    return Layout(
        [(0, 0, 128, 128), (128, 0, 256, 128), (0, 128, 256, 256)],
        [RoomType.BEDROOM, RoomType.KITCHEN, RoomType.BATHROOM],
    )
