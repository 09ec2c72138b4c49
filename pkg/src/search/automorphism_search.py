"""
Automorphism groups of small graphs and digraphs.

AutomorphismSearch walks an individualization-refinement tree: colour
refinement splits vertices by the colour histogram of their out- (and, for
digraphs, in-) neighbourhoods until the colouring is stable, and a
non-singleton cell is then split by individualizing one of its vertices.
The first path down the tree ends in a discrete leaf; every other leaf that
induces an automorphism against it yields a generator. Generators found so
far prune sibling branches through their orbits.
"""

from itertools import islice, permutations
from typing import Any, Dict, List, Optional
import logging
import math

import numpy as np
from numpy.typing import NDArray

from .perm_group import PermGroup, Permutation
from ..config.census_config import get_default_config
from ..core.cayley import CayleyGraph
from ..core.exceptions import CapExceededError, StructuralError

Colouring = NDArray[np.intp]


def _rank(rows: NDArray) -> Colouring:
    """Dense colour indices ordered by signature; label independent."""
    if rows.ndim == 1:
        _, inverse = np.unique(rows, return_inverse=True)
    else:
        _, inverse = np.unique(rows, axis=0, return_inverse=True)
    return inverse.reshape(-1).astype(np.intp)


def _orbit_roots(degree: int, generators: List[Permutation]) -> NDArray[np.intp]:
    parent = list(range(degree))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in generators:
        for v in range(degree):
            ra, rb = find(v), find(g(v))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return np.array([find(v) for v in range(degree)], dtype=np.intp)


class AutomorphismSearch:
    """
    Computes Aut(graph) as a PermGroup.

    Each instance owns its search state; run it once per graph.
    """

    def __init__(self, graph: CayleyGraph, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the search.

        Args:
            graph: Graph or digraph to analyse
            config: Configuration dictionary; only the 'search' section is read

        Raises:
            CapExceededError: graph larger than search.max_degree
        """
        self.config = config or get_default_config()
        self.logger = logging.getLogger(__name__)
        self.graph = graph
        max_degree = self.config['search']['max_degree']
        if graph.n > max_degree:
            raise CapExceededError(
                f"graph on {graph.n} vertices exceeds the automorphism search cap of {max_degree}"
            )
        self._adj = graph.adjacency.astype(np.int64)
        self._adj_t = self._adj.T.copy()

        self.nodes_visited = 0
        self.leaves_reached = 0

        self._path_invariants: List[bytes] = []
        self._leaf: Optional[Colouring] = None

    # ------------------------------------------------------------------
    # refinement

    def _refine(self, colours: Colouring) -> Colouring:
        n = self.graph.n
        while True:
            k = int(colours.max()) + 1 if n else 0
            onehot = np.zeros((n, k), dtype=np.int64)
            onehot[np.arange(n), colours] = 1
            blocks = [colours[:, None], self._adj @ onehot]
            if self.graph.directed:
                blocks.append(self._adj_t @ onehot)
            refined = _rank(np.hstack(blocks))
            if int(refined.max()) + 1 == k:
                return refined
            colours = refined

    def _initial_colouring(self) -> Colouring:
        # loop status is the only vertex label a plain graph carries
        return self._refine(_rank(self.graph.adjacency.diagonal().astype(np.int64)))

    @staticmethod
    def _individualize(colours: Colouring, v: int) -> Colouring:
        split = colours * 2 + 1
        split[v] = colours[v] * 2
        return _rank(split)

    def _child(self, colours: Colouring, v: int) -> Colouring:
        return self._refine(self._individualize(colours, v))

    def _invariant(self, colours: Colouring) -> bytes:
        k = int(colours.max()) + 1
        onehot = np.zeros((self.graph.n, k), dtype=np.int64)
        onehot[np.arange(self.graph.n), colours] = 1
        quotient = onehot.T @ self._adj @ onehot
        return np.bincount(colours, minlength=k).tobytes() + quotient.tobytes()

    @staticmethod
    def _target_cell(colours: Colouring) -> Optional[NDArray[np.intp]]:
        """Members of the first smallest non-singleton cell, ascending; None if discrete."""
        sizes = np.bincount(colours)
        splittable = np.flatnonzero(sizes > 1)
        if splittable.size == 0:
            return None
        target = splittable[np.argmin(sizes[splittable])]
        return np.flatnonzero(colours == target)

    # ------------------------------------------------------------------
    # leaves

    def _leaf_map(self, leaf: Colouring) -> Permutation:
        position = np.empty_like(leaf)
        position[leaf] = np.arange(leaf.shape[0], dtype=np.intp)
        return Permutation._trusted(position[self._leaf])

    def _preserves_adjacency(self, images: NDArray[np.intp]) -> bool:
        return bool(np.array_equal(self._adj[np.ix_(images, images)], self._adj))

    def _search_subtree(self, colours: Colouring, depth: int) -> Optional[Permutation]:
        """Depth-first search below a node for a leaf equivalent to the first leaf."""
        self.nodes_visited += 1
        if depth >= len(self._path_invariants) or self._invariant(colours) != self._path_invariants[depth]:
            return None
        cell = self._target_cell(colours)
        if cell is None:
            self.leaves_reached += 1
            gamma = self._leaf_map(colours)
            return gamma if self._preserves_adjacency(gamma.images) else None
        for u in cell:
            found = self._search_subtree(self._child(colours, int(u)), depth + 1)
            if found is not None:
                return found
        return None

    # ------------------------------------------------------------------

    def run(self) -> PermGroup:
        """
        Generators of the full automorphism group.

        Levels of the first path are processed deepest first, so the
        generators known when level i is handled all fix the first i
        individualized vertices.
        """
        n = self.graph.n
        if n == 0:
            return PermGroup(0)

        path_colours = [self._initial_colouring()]
        path_vertices: List[int] = []
        self._path_invariants = [self._invariant(path_colours[0])]
        while True:
            cell = self._target_cell(path_colours[-1])
            if cell is None:
                break
            v = int(cell[0])
            path_vertices.append(v)
            path_colours.append(self._child(path_colours[-1], v))
            self._path_invariants.append(self._invariant(path_colours[-1]))
        self._leaf = path_colours[-1]
        self.leaves_reached = 1

        generators: List[Permutation] = []
        for depth in reversed(range(len(path_vertices))):
            colours = path_colours[depth]
            v = path_vertices[depth]
            failed: List[int] = []
            roots = _orbit_roots(n, generators)
            for w in self._target_cell(colours):
                w = int(w)
                if roots[w] == roots[v] or any(roots[w] == roots[f] for f in failed):
                    continue
                gamma = self._search_subtree(self._child(colours, w), depth + 1)
                if gamma is None:
                    failed.append(w)
                else:
                    generators.append(gamma)
                    roots = _orbit_roots(n, generators)

        self.logger.debug(
            f"Automorphism search on {n} vertices: depth {len(path_vertices)}, "
            f"{len(generators)} generators, {self.nodes_visited} nodes, {self.leaves_reached} leaves"
        )
        return PermGroup(n, generators)


def automorphism_group(graph: CayleyGraph, config: Optional[Dict[str, Any]] = None) -> PermGroup:
    """Full automorphism group (arc-preserving for digraphs)."""
    return AutomorphismSearch(graph, config).run()


def is_automorphism(graph: CayleyGraph, p: Permutation) -> bool:
    """True iff p preserves adjacency (arcs, for digraphs)."""
    if p.degree != graph.n:
        raise StructuralError(f"permutation of degree {p.degree} on a graph with {graph.n} vertices")
    adj = graph.adjacency
    return bool(np.array_equal(adj[np.ix_(p.images, p.images)], adj))


def brute_force_automorphisms(
    graph: CayleyGraph,
    config: Optional[Dict[str, Any]] = None
) -> List[Permutation]:
    """
    Every adjacency-preserving permutation, found by checking all n! of them.

    Raises:
        CapExceededError: n above search.brute_force_max_degree
    """
    config = config or get_default_config()
    limit = config['search']['brute_force_max_degree']
    chunk = config['search']['brute_force_chunk']
    n = graph.n
    if n > limit:
        raise CapExceededError(f"brute force refuses n={n} > {limit} ({math.factorial(n)} permutations)")
    adj = graph.adjacency
    found: List[Permutation] = []
    candidates = permutations(range(n))
    while True:
        batch = np.array(list(islice(candidates, chunk)), dtype=np.intp).reshape(-1, n)
        if batch.shape[0] == 0:
            break
        permuted = adj[batch[:, :, None], batch[:, None, :]]
        keep = (permuted == adj).all(axis=(1, 2))
        found.extend(Permutation._trusted(row.copy()) for row in batch[keep])
    return found


def brute_force_aut(graph: CayleyGraph, config: Optional[Dict[str, Any]] = None) -> PermGroup:
    """Aut(graph) by exhaustive filtering; validation oracle for n <= 10."""
    return PermGroup(graph.n, brute_force_automorphisms(graph, config))
