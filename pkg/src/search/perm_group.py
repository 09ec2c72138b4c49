"""
Permutations and permutation groups with a deterministic Schreier-Sims
stabiliser chain.

Composition convention (used everywhere): compose(p, q) applies p first,
then q, i.e. it maps v to q(p(v)).
"""

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple
import logging
import math

import numpy as np
from numpy.typing import NDArray

from ..core.exceptions import StructuralError

logger = logging.getLogger(__name__)


class Permutation:
    """A bijection on {0, ..., n-1} stored as a read-only image array."""

    __slots__ = ("images", "_key")

    def __init__(self, images: Sequence[int]):
        arr = np.array(images, dtype=np.intp)
        if arr.ndim != 1:
            raise StructuralError("permutation images must be one-dimensional")
        n = arr.shape[0]
        seen = np.zeros(n, dtype=bool)
        if n and (arr.min() < 0 or arr.max() >= n):
            raise StructuralError(f"images out of range for degree {n}")
        seen[arr] = True
        if not seen.all():
            raise StructuralError("images do not form a permutation")
        arr.flags.writeable = False
        self.images: NDArray[np.intp] = arr
        self._key = arr.tobytes()

    @classmethod
    def _trusted(cls, arr: NDArray[np.intp]) -> "Permutation":
        # skips validation; arr must already be a bijection owned by the caller
        perm = cls.__new__(cls)
        arr.flags.writeable = False
        perm.images = arr
        perm._key = arr.tobytes()
        return perm

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._trusted(np.arange(degree, dtype=np.intp))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from disjoint cycles, e.g. from_cycles(4, [(0, 1, 2)])."""
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a] = b
        return cls(images)

    @classmethod
    def from_text(cls, text: str) -> "Permutation":
        """Parse a whitespace-separated image list."""
        try:
            return cls([int(token) for token in text.split()])
        except ValueError as exc:
            raise StructuralError(f"malformed permutation text {text!r}") from exc

    @property
    def degree(self) -> int:
        return int(self.images.shape[0])

    def __call__(self, point: int) -> int:
        return int(self.images[point])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Permutation({self.to_cycle_string()})"

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree, dtype=np.intp)
        return Permutation._trusted(inv)

    def is_identity(self) -> bool:
        return bool((self.images == np.arange(self.degree)).all())

    def cycles(self) -> List[Tuple[int, ...]]:
        """Non-trivial cycles, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                continue
            cycle = [start]
            seen[start] = True
            nxt = int(self.images[start])
            while nxt != start:
                seen[nxt] = True
                cycle.append(nxt)
                nxt = int(self.images[nxt])
            out.append(tuple(cycle))
        return out

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def power(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse().power(-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = compose(result, base)
            base = compose(base, base)
            k >>= 1
        return result

    def moved_points(self) -> NDArray[np.intp]:
        return np.flatnonzero(self.images != np.arange(self.degree))

    def first_moved_point(self) -> Optional[int]:
        moved = self.moved_points()
        return int(moved[0]) if moved.size else None

    def to_text(self) -> str:
        return " ".join(str(int(i)) for i in self.images)

    def to_cycle_string(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Left-to-right product: v maps to q(p(v))."""
    if p.degree != q.degree:
        raise StructuralError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation._trusted(q.images[p.images])


@dataclass
class _Level:
    """One stabiliser-chain level: a base point and its orbit transversal."""
    base_point: int
    generators: List[Permutation] = field(default_factory=list)
    # point -> (u, u^-1) with u(base_point) = point
    transversal: Dict[int, Tuple[Permutation, Permutation]] = field(default_factory=dict)
    processed: Set[Tuple[int, bytes]] = field(default_factory=set)


class PermGroup:
    """
    Permutation group given by generators.

    The base and strong generating set are computed on first use by a
    deterministic Schreier-Sims run; new base points are the first point
    moved by the generator that needs them. After that the object is not
    mutated again and may be shared between threads.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation] = ()):
        gens: List[Permutation] = []
        seen: Set[Permutation] = set()
        for g in generators:
            if g.degree != degree:
                raise StructuralError(f"generator of degree {g.degree} in a group of degree {degree}")
            if not g.is_identity() and g not in seen:
                seen.add(g)
                gens.append(g)
        self.degree = degree
        self.generators: Tuple[Permutation, ...] = tuple(gens)
        self._levels: Optional[List[_Level]] = None

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"

    # ------------------------------------------------------------------
    # stabiliser chain

    @property
    def levels(self) -> List[_Level]:
        if self._levels is None:
            self._levels = []
            for g in self.generators:
                self._add_generator(g, 0)
            logger.debug(
                f"Schreier-Sims on degree {self.degree}: base {self.base()}, "
                f"orbit sizes {[len(level.transversal) for level in self._levels]}"
            )
        return self._levels

    def _strong_generators(self, depth: int) -> List[Permutation]:
        gens: List[Permutation] = []
        for level in self._levels[depth:]:
            gens.extend(level.generators)
        return gens

    def _sift_from(self, g: Permutation, depth: int) -> Tuple[Permutation, int]:
        for index in range(depth, len(self._levels)):
            level = self._levels[index]
            point = g(level.base_point)
            coset = level.transversal.get(point)
            if coset is None:
                return g, index
            g = compose(g, coset[1])
        return g, len(self._levels)

    def _add_generator(self, g: Permutation, depth: int) -> None:
        residue, _ = self._sift_from(g, depth)
        if not residue.is_identity():
            self._add_nonmember(residue, depth)

    def _add_nonmember(self, g: Permutation, depth: int) -> None:
        if depth == len(self._levels):
            base_point = g.first_moved_point()
            identity = Permutation.identity(self.degree)
            self._levels.append(
                _Level(base_point=base_point, transversal={base_point: (identity, identity)})
            )
        level = self._levels[depth]
        if g(level.base_point) == level.base_point:
            self._add_nonmember(g, depth + 1)
        else:
            level.generators.append(g)
        self._extend_orbit(depth)
        self._add_schreier_generators(depth)

    def _extend_orbit(self, depth: int) -> None:
        level = self._levels[depth]
        gens = self._strong_generators(depth)
        queue = deque(level.transversal)
        while queue:
            point = queue.popleft()
            u, _ = level.transversal[point]
            for s in gens:
                image = s(point)
                if image not in level.transversal:
                    v = compose(u, s)
                    level.transversal[image] = (v, v.inverse())
                    queue.append(image)

    def _add_schreier_generators(self, depth: int) -> None:
        level = self._levels[depth]
        for s in self._strong_generators(depth):
            for point in sorted(level.transversal):
                key = (point, s._key)
                if key in level.processed:
                    continue
                level.processed.add(key)
                u, _ = level.transversal[point]
                _, v_inv = level.transversal[s(point)]
                schreier = compose(compose(u, s), v_inv)
                if not schreier.is_identity():
                    self._add_generator(schreier, depth + 1)

    # ------------------------------------------------------------------
    # queries

    def base(self) -> List[int]:
        return [level.base_point for level in self.levels]

    def order(self) -> int:
        return math.prod(len(level.transversal) for level in self.levels)

    def sift(self, g: Permutation) -> Tuple[Permutation, int]:
        """Residue of g and the level at which sifting stopped."""
        if g.degree != self.degree:
            raise StructuralError(f"degree mismatch: {g.degree} vs {self.degree}")
        self.levels
        return self._sift_from(g, 0)

    def contains(self, g: Permutation) -> bool:
        residue, depth = self.sift(g)
        return depth == len(self.levels) and residue.is_identity()

    def __contains__(self, g: Permutation) -> bool:
        return self.contains(g)

    def elements(self) -> Iterator[Permutation]:
        """Every element exactly once (as products of coset representatives)."""
        cosets = [list(level.transversal.values()) for level in reversed(self.levels)]
        for choice in product(*cosets):
            g = Permutation.identity(self.degree)
            for u, _ in choice:
                g = compose(g, u)
            yield g

    def random_element(self, rng: np.random.Generator) -> Permutation:
        """Uniformly random element: one random coset representative per level."""
        g = Permutation.identity(self.degree)
        for level in reversed(self.levels):
            reps = list(level.transversal.values())
            u, _ = reps[int(rng.integers(len(reps)))]
            g = compose(g, u)
        return g

    def orbits(self) -> List[List[int]]:
        parent = list(range(self.degree))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for g in self.generators:
            for v in range(self.degree):
                ra, rb = find(v), find(g(v))
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        groups: Dict[int, List[int]] = {}
        for v in range(self.degree):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def is_abelian(self) -> bool:
        return all(
            compose(g, h) == compose(h, g)
            for i, g in enumerate(self.generators)
            for h in self.generators[i + 1:]
        )

    def to_text(self) -> str:
        """One permutation per line."""
        return "\n".join(g.to_text() for g in self.generators)

    @classmethod
    def from_text(cls, text: str, degree: Optional[int] = None) -> "PermGroup":
        gens = [Permutation.from_text(line) for line in text.splitlines() if line.strip()]
        if degree is None:
            if not gens:
                raise StructuralError("cannot infer the degree of an empty generator list")
            degree = gens[0].degree
        return cls(degree, gens)


def schreier_sims(G: PermGroup) -> Tuple[int, Callable[[Permutation], bool]]:
    """Order of G and a membership oracle deciding g in G by sifting."""
    return G.order(), G.contains


def is_subgroup(H: PermGroup, G: PermGroup) -> bool:
    """True iff every generator of H sifts through G's chain."""
    if H.degree != G.degree:
        raise StructuralError(f"degree mismatch: {H.degree} vs {G.degree}")
    return all(G.contains(h) for h in H.generators)


def groups_equal(H: PermGroup, G: PermGroup) -> bool:
    return is_subgroup(H, G) and H.order() == G.order()


def enumerate_closure(degree: int, generators: Iterable[Permutation]) -> Set[Permutation]:
    """All elements of <generators> by breadth-first multiplication."""
    gens = list(generators)
    identity = Permutation.identity(degree)
    members = {identity}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = compose(g, s)
            if h not in members:
                members.add(h)
                queue.append(h)
    return members
