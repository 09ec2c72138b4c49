"""
Tests for the individualization-refinement automorphism search.
"""

import numpy as np
import pytest

from src.core.canonical import build_canonical_B, quaternion_alphas, regular_representation
from src.core.cayley import (
    CayleyGraph,
    ConnectionSet,
    build_cayley,
    enumerate_inverse_closed,
    sample_inverse_closed,
    sample_subset,
)
from src.core.dicyclic import iota, quaternion_group
from src.core.exceptions import CapExceededError, StructuralError
from src.search.automorphism_search import (
    AutomorphismSearch,
    automorphism_group,
    brute_force_aut,
    is_automorphism,
)
from src.search.perm_group import Permutation, groups_equal, is_subgroup


def test_edgeless_graph():
    """Test the edgeless graph on 4 vertices has Sym(4)"""
    assert automorphism_group(CayleyGraph.edgeless(4)).order() == 24


def test_empty_graph():
    """Test the graph on no vertices"""
    assert automorphism_group(CayleyGraph.edgeless(0)).order() == 1


def test_two_four_cycles(q8):
    """Test Aut of two disjoint 4-cycles has order 128"""
    graph = build_cayley(q8, ConnectionSet.from_members(q8.n, [1, 3]))
    assert automorphism_group(graph).order() == 128


def test_complete_bipartite(q8, config):
    """Test Cay(Q8, {+-i, +-j}) = K_{4,4} against brute force"""
    graph = build_cayley(q8, ConnectionSet.from_hex(q8.n, "5a"))
    aut = automorphism_group(graph, config)
    assert aut.order() == 1152
    assert groups_equal(brute_force_aut(graph, config), aut)


def test_quaternion_sets_match_brute_force(q8, config):
    """Test all 32 inverse-closed Q8 sets against exhaustive filtering"""
    for S in enumerate_inverse_closed(q8):
        graph = build_cayley(q8, S)
        assert groups_equal(brute_force_aut(graph, config), automorphism_group(graph, config)), S.to_hex()


def test_directed_graphs_match_brute_force(q8, config):
    """Test Cayley digraphs on Q8 against exhaustive filtering"""
    for seed in range(12):
        graph = build_cayley(q8, sample_subset(q8, seed), directed=True)
        assert groups_equal(brute_force_aut(graph, config), automorphism_group(graph, config))


def test_non_cayley_graph(config):
    """Test a path with a pendant loop"""
    adjacency = np.zeros((5, 5), dtype=bool)
    for u, v in [(0, 1), (1, 2), (2, 3), (3, 4)]:
        adjacency[u, v] = adjacency[v, u] = True
    path = CayleyGraph.from_adjacency(adjacency)
    assert automorphism_group(path, config).order() == 2
    adjacency[0, 0] = True
    assert automorphism_group(CayleyGraph.from_adjacency(adjacency), config).order() == 1


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_alphas_are_automorphisms(ell):
    """Test the alphas and R preserve every sampled Cayley graph of Q8 x C2^l"""
    G = quaternion_group(ell)
    maps = quaternion_alphas(G) + regular_representation(G).generators
    for seed in range(200):
        graph = build_cayley(G, sample_inverse_closed(G, seed))
        assert all(is_automorphism(graph, p) for p in maps)


def test_iota_is_automorphism(dic_c6, dic_c8):
    """Test iota preserves every sampled undirected Cayley graph"""
    for G in (dic_c6, dic_c8):
        flip = iota(G)
        for seed in range(50):
            assert is_automorphism(build_cayley(G, sample_inverse_closed(G, seed)), flip)


def test_is_automorphism_agrees_with_search(dic_c6, config):
    """Test random permutations are automorphisms exactly when the search says so"""
    rng = np.random.default_rng(3)
    graph = build_cayley(dic_c6, sample_inverse_closed(dic_c6, 9))
    aut = automorphism_group(graph, config)
    outcomes = []
    for _ in range(50):
        p = Permutation(rng.permutation(dic_c6.n))
        outcomes.append(is_automorphism(graph, p))
        assert outcomes[-1] == (p in aut)
    assert not all(outcomes)
    with pytest.raises(StructuralError):
        is_automorphism(graph, Permutation.identity(3))


@pytest.mark.parametrize("spec_fixture", ["q8", "q8e1", "dic_c6", "dic_c8", "dic_c4xc2_generic"])
def test_B_contained_in_aut(request, spec_fixture, config):
    """Test B <= Aut for sampled undirected graphs"""
    G = request.getfixturevalue(spec_fixture)
    B = build_canonical_B(G).group
    for seed in range(10):
        graph = build_cayley(G, sample_inverse_closed(G, seed))
        assert is_subgroup(B, automorphism_group(graph, config))


def test_regular_contained_in_directed_aut(dic_c6, config):
    """Test R <= Aut for sampled digraphs"""
    R = regular_representation(dic_c6)
    for seed in range(10):
        graph = build_cayley(dic_c6, sample_subset(dic_c6, seed), directed=True)
        assert is_subgroup(R, automorphism_group(graph, config))


def test_search_is_deterministic(dic_c8, config):
    """Test repeated runs return identical generators"""
    graph = build_cayley(dic_c8, sample_inverse_closed(dic_c8, 1))
    first = AutomorphismSearch(graph, config).run()
    second = AutomorphismSearch(graph, config).run()
    assert first.generators == second.generators
    assert first.order() == second.order()


def test_search_statistics(q8, config):
    """Test node and leaf counters are populated"""
    search = AutomorphismSearch(CayleyGraph.edgeless(q8.n), config)
    assert search.run().order() == 40320
    assert search.nodes_visited > 0
    assert search.leaves_reached >= 1


def test_caps(q8, config):
    """Test the degree caps"""
    config['search']['max_degree'] = 4
    with pytest.raises(CapExceededError):
        AutomorphismSearch(CayleyGraph.edgeless(q8.n), config)
    config['search']['brute_force_max_degree'] = 4
    with pytest.raises(CapExceededError):
        brute_force_aut(CayleyGraph.edgeless(5), config)
