"""
Finite abelian groups given as direct products of cyclic groups.

Elements are residue vectors; their lexicographic order is the element
enumeration every downstream vertex numbering is built from.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import FrozenSet, Iterable, List, Set, Tuple
import math
import re

from .exceptions import BoundViolation, DomainError, SpecParseError, StructuralError

_FACTOR_RE = re.compile(r"^c(\d+)(?:\^(\d+))?$")


@dataclass(frozen=True, order=True)
class AbelianElement:
    """Residue vector; coords[i] lies in [0, d_i) for the parent group."""
    coords: Tuple[int, ...]

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class AbelianGroup:
    """Direct product C_{d1} x ... x C_{dk}, factors kept in the given order."""
    factors: Tuple[int, ...]

    def __post_init__(self):
        if any(d < 2 for d in self.factors):
            raise StructuralError(f"cyclic factors must have order >= 2, got {self.factors}")

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        """
        Parse "C4xC2x..." (case-insensitive). "C2^3" repeats a factor.

        Raises:
            SpecParseError: on anything else
        """
        factors: List[int] = []
        cleaned = text.strip().lower()
        if not cleaned:
            raise SpecParseError("empty group spec")
        for token in cleaned.split("x"):
            match = _FACTOR_RE.match(token.strip())
            if not match:
                raise SpecParseError(f"malformed cyclic factor {token!r} in {text!r}")
            order = int(match.group(1))
            repeat = int(match.group(2)) if match.group(2) is not None else 1
            if order < 2:
                raise SpecParseError(f"cyclic factor C{order} in {text!r} must have order >= 2")
            factors.extend([order] * repeat)
        if not factors:
            raise SpecParseError(f"no factors in {text!r}")
        return cls(tuple(factors))

    @property
    def spec(self) -> str:
        return "x".join(f"C{d}" for d in self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.factors)

    @cached_property
    def _elements(self) -> Tuple[AbelianElement, ...]:
        return tuple(
            AbelianElement(coords)
            for coords in product(*(range(d) for d in self.factors))
        )

    def elements(self) -> Tuple[AbelianElement, ...]:
        """All elements in lexicographic coordinate order."""
        return self._elements

    def identity(self) -> AbelianElement:
        return AbelianElement((0,) * self.rank)

    def element(self, *coords: int) -> AbelianElement:
        """Build an element, reducing each coordinate modulo its factor."""
        if len(coords) != self.rank:
            raise StructuralError(
                f"{len(coords)} coordinates given for a group with {self.rank} factors"
            )
        return AbelianElement(tuple(c % d for c, d in zip(coords, self.factors)))

    def validate(self, u: AbelianElement) -> None:
        if len(u.coords) != self.rank:
            raise StructuralError(
                f"element {u} has {len(u.coords)} coordinates, group {self.spec} has {self.rank}"
            )
        for c, d in zip(u.coords, self.factors):
            if not 0 <= c < d:
                raise StructuralError(f"coordinate {c} of {u} out of range for C{d}")

    def mul(self, u: AbelianElement, v: AbelianElement) -> AbelianElement:
        return ab_mul(self, u, v)

    def inverse(self, u: AbelianElement) -> AbelianElement:
        return AbelianElement(tuple((-c) % d for c, d in zip(u.coords, self.factors)))

    def power(self, u: AbelianElement, k: int) -> AbelianElement:
        return AbelianElement(tuple((c * k) % d for c, d in zip(u.coords, self.factors)))

    def square(self, u: AbelianElement) -> AbelianElement:
        return self.power(u, 2)

    def element_order(self, u: AbelianElement) -> int:
        return math.lcm(*(d // math.gcd(c, d) for c, d in zip(u.coords, self.factors)))

    def is_involution(self, u: AbelianElement) -> bool:
        """True iff u has order exactly 2."""
        return self.element_order(u) == 2

    def squares(self) -> FrozenSet[AbelianElement]:
        return frozenset(self.square(a) for a in self.elements())

    def closure(self, generators: Iterable[AbelianElement]) -> FrozenSet[AbelianElement]:
        """Subgroup generated by the given elements."""
        members: Set[AbelianElement] = {self.identity()}
        frontier = [self.identity()]
        gens = list(generators)
        while frontier:
            u = frontier.pop()
            for g in gens:
                w = self.mul(u, g)
                if w not in members:
                    members.add(w)
                    frontier.append(w)
        return frozenset(members)

    def _extend(self, subgroup: FrozenSet[AbelianElement], a: AbelianElement) -> FrozenSet[AbelianElement]:
        # H<a> is the union of the cosets H a^k
        members: Set[AbelianElement] = set(subgroup)
        power = a
        while power not in subgroup:
            members.update(self.mul(h, power) for h in subgroup)
            power = self.mul(power, a)
        return frozenset(members)

    def subgroups(self) -> List[Tuple[AbelianElement, ...]]:
        """
        Every subgroup, as a sorted element tuple, sorted by (size, elements).

        Built by closing each known subgroup with one more element until no
        new subgroup appears; desk scale only.
        """
        trivial = frozenset({self.identity()})
        known: Set[FrozenSet[AbelianElement]] = {trivial}
        frontier = [trivial]
        while frontier:
            subgroup = frontier.pop()
            for a in self.elements():
                if a in subgroup:
                    continue
                extended = self._extend(subgroup, a)
                if extended not in known:
                    known.add(extended)
                    frontier.append(extended)
        return sorted((tuple(sorted(h)) for h in known), key=lambda h: (len(h), h))


def ab_mul(G: AbelianGroup, u: AbelianElement, v: AbelianElement) -> AbelianElement:
    """Componentwise sum modulo the cyclic factors."""
    if len(u.coords) != G.rank or len(v.coords) != G.rank:
        raise StructuralError(
            f"dimension mismatch: {u} * {v} in a group with {G.rank} factors"
        )
    return AbelianElement(tuple((a + b) % d for a, b, d in zip(u.coords, v.coords, G.factors)))


def involution_closure_count(G: AbelianGroup) -> int:
    """|A_2| = |{a : a^2 = 1}|, identity included."""
    return math.prod(math.gcd(d, 2) for d in G.factors)


def is_quaternion_type(G: AbelianGroup, y: AbelianElement) -> bool:
    """
    True iff A has shape C4 x C2^l and y is the unique non-identity square.

    Shape is detected without normal forms: exponent 4 and |A_2| = |A|/2.
    """
    if G.exponent != 4 or 2 * involution_closure_count(G) != G.order:
        return False
    return G.squares() - {G.identity()} == {y}


def _require_involution(G: AbelianGroup, y: AbelianElement) -> None:
    G.validate(y)
    if G.exponent <= 2:
        raise DomainError(f"{G.spec} has exponent <= 2; no generalised dicyclic group is built on it")
    if not G.is_involution(y):
        raise DomainError(f"{y} is not an involution of {G.spec}")


def square_fiber(G: AbelianGroup, b: AbelianElement, y: AbelianElement) -> Set[AbelianElement]:
    """
    X = {a : a^2 in {b, b*y}}.

    When Dic(A, y, x) is not Q8 x C2^l, |X| <= 2|A|/3 and a violation raises
    BoundViolation.
    """
    _require_involution(G, y)
    G.validate(b)
    targets = {b, G.mul(b, y)}
    fiber = {a for a in G.elements() if G.square(a) in targets}
    if not is_quaternion_type(G, y) and 3 * len(fiber) > 2 * G.order:
        raise BoundViolation(
            f"|X| = {len(fiber)} exceeds 2|A|/3 for A={G.spec}, y={y}, b={b}"
        )
    return fiber


def outside_square_complement(
    G: AbelianGroup,
    U: Iterable[AbelianElement],
    y: AbelianElement
) -> Set[AbelianElement]:
    """
    X = {a : a not in U, a^2 != y}, asserted to satisfy |X| >= |A|/4.

    Args:
        G: the abelian group A
        U: a proper subgroup of A, given by its elements
        y: an involution of A with Dic(A, y, x) not Q8 x C2^l

    Raises:
        DomainError: U is all of A, U is not a subgroup, or y is unsuitable
        BoundViolation: the bound fails (cannot happen for valid input)
    """
    _require_involution(G, y)
    subgroup = frozenset(U)
    for u in subgroup:
        G.validate(u)
    if G.closure(subgroup) != subgroup:
        raise DomainError("U is not a subgroup")
    if len(subgroup) == G.order:
        raise DomainError("U must be a proper subgroup of A")
    if is_quaternion_type(G, y):
        raise DomainError(f"Dic({G.spec}, y={y}) is Q8 x C2^l; the bound does not apply")
    complement = {a for a in G.elements() if a not in subgroup and G.square(a) != y}
    if 4 * len(complement) < G.order:
        raise BoundViolation(
            f"|X| = {len(complement)} below |A|/4 for A={G.spec}, y={y}, |U|={len(subgroup)}"
        )
    return complement
