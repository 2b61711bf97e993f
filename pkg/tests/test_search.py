import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from embthick.errors import DecompositionError, SearchTimeout
from embthick.planarity import layer_ok
from embthick.search import Deadline, SearchStats, outerplanar_bipartition, partition_search


def triangulation(n, seed):
    """Random stacked triangulation: repeatedly insert a vertex into a face."""
    rng = random.Random(seed)
    faces = [(0, 1, 2), (0, 1, 2)]
    pairs = {(0, 1), (0, 2), (1, 2)}
    for v in range(3, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        faces += [(a, b, v), (a, c, v), (b, c, v)]
        pairs |= {(a, v), (b, v), (c, v)}
    return sorted(pairs)


def _layers(pairs, where, k):
    return [[p for p, c in zip(pairs, where) if c == i] for i in range(k)]


def _brute_feasible(pairs, k, kind):
    for where in itertools.product(range(k), repeat=len(pairs)):
        if all(layer_ok(kind, layer) for layer in _layers(pairs, where, k)):
            return True
    return False


@given(st.integers(4, 9), st.integers(0, 10**6))
def test_bipartition_of_planar_graphs(n, seed):
    pairs = triangulation(n, seed)
    a, b = outerplanar_bipartition(pairs)
    assert sorted(a + b) == list(range(len(pairs)))
    assert layer_ok("outerplanar", [pairs[i] for i in a])
    assert layer_ok("outerplanar", [pairs[i] for i in b])


def test_bipartition_rejects_nonplanar():
    with pytest.raises(DecompositionError):
        outerplanar_bipartition(list(itertools.combinations(range(5), 2)))


@given(st.integers(4, 6), st.integers(0, 10**6), st.sampled_from(["planar", "outerplanar"]))
def test_search_matches_brute_force(n, seed, kind):
    rng = random.Random(seed)
    pairs = rng.sample(list(itertools.combinations(range(n), 2)), rng.randint(4, min(9, n * (n - 1) // 2)))
    for k in (1, 2):
        where = partition_search(pairs, k, kind)
        if where is None:
            assert not _brute_feasible(pairs, k, kind)
        else:
            assert all(layer_ok(kind, layer) for layer in _layers(pairs, where, k))


@pytest.mark.parametrize("n,kind,k,feasible", [(5, "planar", 1, False), (5, "planar", 2, True), (7, "outerplanar", 2, False), (8, "planar", 2, True)])
def test_complete_graph_instances(n, kind, k, feasible):
    pairs = list(itertools.combinations(range(n), 2))
    stats = SearchStats()
    assert (partition_search(pairs, k, kind, stats=stats) is not None) is feasible
    assert stats.method


def test_deadline_raises():
    pairs = list(itertools.combinations(range(7), 2))
    with pytest.raises(SearchTimeout):
        # two outerplanar layers pass the edge count for K7 but do not exist
        partition_search(pairs, 2, "outerplanar", Deadline(0.0))


def test_deadline_without_limit_never_expires():
    assert not Deadline(None).expired()
