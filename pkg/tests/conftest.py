import itertools

import numpy as np
import pytest

from sparse_wavelets.graph import Graph

TWO_TRIANGLES = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]

# vertices a..g; cuts {(b,d),(c,d)} then {(e,f),(e,g)}
FIG1_EDGES = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6)]
FIG1_SIGNAL = np.array([9.0, 9.0, 10.0, -4.0, -6.0, -9.0, -9.0])
# (node to split, left side); node ids follow creation order
FIG1_SPLITS = [(0, [0, 1, 2]), (1, [0, 1]), (2, [3, 4]), (3, [0]), (5, [3]), (6, [5])]


@pytest.fixture
def two_triangles():
    return Graph.from_edges(6, TWO_TRIANGLES)


@pytest.fixture
def two_triangle_signal():
    return np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])


def random_graph(n, p, rng):
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, pairs)


def connected_random_graph(n, p, rng):
    """Random graph plus a random spanning path so it is connected."""
    perm = rng.permutation(n)
    pairs = {tuple(sorted((int(perm[i]), int(perm[i + 1])))) for i in range(n - 1)}
    pairs |= {(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p}
    return Graph.from_edges(n, sorted(pairs))


def random_tree_splits(n, rng):
    """Random full hierarchy as (node, left) splits in creation order."""
    from sparse_wavelets.wavelet import TreeBuilder

    builder = TreeBuilder(Graph.from_edges(n, []))
    queue = [0]
    while queue:
        node = queue.pop(0)
        members = builder.members(node)
        if len(members) < 2:
            continue
        perm = rng.permutation(members)
        k = int(rng.integers(1, len(members)))
        queue.extend(builder.split(node, perm[:k]))
    return builder


def all_bipartitions(n):
    """Every bipartition of range(n) once, as boolean masks with vertex 0 on the left."""
    for bits in range(2 ** (n - 1)):
        mask = np.zeros(n, dtype=bool)
        mask[0] = True
        for i in range(1, n):
            mask[i] = not (bits >> (i - 1)) & 1
        if mask.all():
            continue
        yield mask


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
