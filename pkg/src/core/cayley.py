"""
Connection sets and Cayley (di)graphs over a dicyclic group's element
enumeration.

Inverse-closed sets are indexed by choosing, independently, each orbit of
r -> r^-1: self-inverse elements first (ascending), then pairs {r, r^-1}
ordered by their least element. Bit j of an index selects orbit j.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union
import logging

import networkx as nx
import numpy as np
from numpy.typing import NDArray

from .dicyclic import DicyclicGroup
from .exceptions import CapExceededError, DomainError, StructuralError
from ..config.census_config import get_default_config

logger = logging.getLogger(__name__)

SeedLike = Union[int, Sequence[int]]


@dataclass(frozen=True)
class ConnectionSet:
    """Subset of the group as a bitmask; bit i is element_order[i]."""
    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise StructuralError(f"mask {self.mask:#x} has bits beyond {self.n} elements")

    @classmethod
    def empty(cls, n: int) -> "ConnectionSet":
        return cls(n, 0)

    @classmethod
    def from_members(cls, n: int, members: Iterable[int]) -> "ConnectionSet":
        mask = 0
        for i in members:
            if not 0 <= i < n:
                raise StructuralError(f"element index {i} out of range for n={n}")
            mask |= 1 << i
        return cls(n, mask)

    @classmethod
    def from_hex(cls, n: int, text: str) -> "ConnectionSet":
        """Lowercase (or uppercase) hex, least-significant bit = element 0."""
        try:
            mask = int(text.strip().lower().removeprefix("0x") or "0", 16)
        except ValueError as exc:
            raise StructuralError(f"malformed hex connection set {text!r}") from exc
        return cls(n, mask)

    @classmethod
    def from_index(cls, G: DicyclicGroup, index: int) -> "ConnectionSet":
        """Decode a census index over the inversion-orbit order."""
        return connection_set_from_index(G, index)

    def to_hex(self) -> str:
        width = max(1, (self.n + 3) // 4)
        return format(self.mask, f"0{width}x")

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def members(self) -> List[int]:
        return [i for i in range(self.n) if self.mask >> i & 1]

    def bits(self) -> NDArray[np.bool_]:
        return np.array([bool(self.mask >> i & 1) for i in range(self.n)], dtype=bool)

    def is_inverse_closed(self, G: DicyclicGroup) -> bool:
        inv = G.inv_table
        return all((int(inv[i]) in self) for i in self.members())


@dataclass(frozen=True, eq=False)
class CayleyGraph:
    """
    Graph or digraph on n vertices given by a read-only boolean adjacency
    matrix. Loops are kept on the diagonal.
    """
    n: int
    adjacency: NDArray[np.bool_]
    directed: bool = False

    @classmethod
    def from_adjacency(cls, matrix, directed: bool = False) -> "CayleyGraph":
        adjacency = np.array(matrix, dtype=bool)
        if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
            raise StructuralError(f"adjacency must be square, got shape {adjacency.shape}")
        if not directed and not (adjacency == adjacency.T).all():
            raise DomainError("undirected graph needs a symmetric adjacency matrix")
        adjacency.flags.writeable = False
        return cls(adjacency.shape[0], adjacency, directed)

    @classmethod
    def edgeless(cls, n: int) -> "CayleyGraph":
        return cls.from_adjacency(np.zeros((n, n), dtype=bool))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u, v])

    def neighbours(self, u: int) -> List[int]:
        return [int(v) for v in np.flatnonzero(self.adjacency[u])]

    def edge_count(self) -> int:
        off_diagonal = int(self.adjacency.sum()) - int(np.trace(self.adjacency))
        loops = int(np.trace(self.adjacency))
        return loops + (off_diagonal if self.directed else off_diagonal // 2)

    def to_networkx(self) -> nx.Graph:
        """Export as a networkx Graph or DiGraph; loops become self-edges."""
        graph = nx.DiGraph() if self.directed else nx.Graph()
        graph.add_nodes_from(range(self.n))
        rows, cols = np.nonzero(self.adjacency)
        graph.add_edges_from(zip(rows.tolist(), cols.tolist()))
        return graph


def build_cayley(G: DicyclicGroup, S: ConnectionSet, directed: bool = False) -> CayleyGraph:
    """
    Cay(R, S): u ~ v (arc u -> v when directed) iff element(u) element(v)^-1 in S.

    Raises:
        StructuralError: S is over a different element count
        DomainError: undirected with S not inverse-closed
    """
    if S.n != G.n:
        raise StructuralError(f"connection set over {S.n} elements for a group of order {G.n}")
    if not directed and not S.is_inverse_closed(G):
        raise DomainError(f"connection set {S.to_hex()} is not inverse-closed")
    quotient = G.mul_table[:, G.inv_table]
    adjacency = S.bits()[quotient]
    adjacency.flags.writeable = False
    return CayleyGraph(G.n, adjacency, directed)


def orbit_decomposition(G: DicyclicGroup) -> List[Tuple[int, ...]]:
    """Orbits of inversion in index order: self-inverse singletons, then pairs."""
    inv = G.inv_table
    singles = [(i,) for i in range(G.n) if inv[i] == i]
    pairs = [(i, int(inv[i])) for i in range(G.n) if i < inv[i]]
    return singles + pairs


def count_inverse_closed(G: DicyclicGroup) -> int:
    """2^(m/2 + n/2), exactly."""
    return 2 ** len(orbit_decomposition(G))


def connection_set_from_index(G: DicyclicGroup, index: int) -> ConnectionSet:
    orbits = orbit_decomposition(G)
    if not 0 <= index < 2 ** len(orbits):
        raise StructuralError(f"index {index} out of range for {len(orbits)} orbits")
    mask = 0
    for j, orbit in enumerate(orbits):
        if index >> j & 1:
            for i in orbit:
                mask |= 1 << i
    return ConnectionSet(G.n, mask)


def enumerate_inverse_closed(G: DicyclicGroup, cap: Optional[int] = None) -> Iterator[ConnectionSet]:
    """
    Every inverse-closed subset once, index 0 (the empty set) first. cap
    defaults to enumeration.max_sets of the default config.

    Raises:
        CapExceededError: more sets than cap
    """
    if cap is None:
        cap = get_default_config()["enumeration"]["max_sets"]
    total = count_inverse_closed(G)
    if total > cap:
        raise CapExceededError(
            f"{G.spec} has {total} inverse-closed sets, above the cap of {cap}; "
            f"use sampling instead"
        )
    orbit_masks = [sum(1 << i for i in orbit) for orbit in orbit_decomposition(G)]
    for index in range(total):
        mask = 0
        for j, orbit_mask in enumerate(orbit_masks):
            if index >> j & 1:
                mask |= orbit_mask
        yield ConnectionSet(G.n, mask)


def sample_inverse_closed_index(G: DicyclicGroup, seed: SeedLike) -> int:
    """Uniform index: each inversion orbit included with probability 1/2."""
    orbits = orbit_decomposition(G)
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=len(orbits))
    return sum(int(bit) << j for j, bit in enumerate(bits))


def sample_inverse_closed(G: DicyclicGroup, seed: SeedLike) -> ConnectionSet:
    """Uniformly random inverse-closed set; a pure function of (G, seed)."""
    return connection_set_from_index(G, sample_inverse_closed_index(G, seed))


def sample_subset(G: DicyclicGroup, seed: SeedLike) -> ConnectionSet:
    """Uniformly random subset of R (every element independently with probability 1/2)."""
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=G.n)
    return ConnectionSet(G.n, sum(int(bit) << i for i, bit in enumerate(bits)))
