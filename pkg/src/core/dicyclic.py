"""
Generalised dicyclic groups Dic(A, y, x) = <A, x | x^2 = y, a^x = a^-1>.

Elements are pairs (a, eps) standing for a * x^eps. The closed-form product

    (a, d)(b, e) = (a * b^((-1)^d) * y^(d*e), d xor e)

is the only multiplication rule; it follows from x b = b^-1 x and x^2 = y.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Tuple

import numpy as np
from numpy.typing import NDArray

from .abelian import AbelianElement, AbelianGroup, involution_closure_count, is_quaternion_type
from .exceptions import DomainError, StructuralError
from ..search.perm_group import Permutation


@dataclass(frozen=True, order=True)
class DicyclicElement:
    """a * x^eps with eps in {0, 1}."""
    eps: int
    a: AbelianElement

    def __str__(self) -> str:
        return f"{self.a}" if self.eps == 0 else f"{self.a}x"


@dataclass(frozen=True)
class DicyclicGroup:
    """
    Dic(A, y, x) with a fixed element enumeration: all (a, 0) in
    lexicographic A-order, then all (a, 1) in the same order. Vertex v of
    every graph built on the group is element_order[v].
    """
    base: AbelianGroup
    y: AbelianElement

    def __post_init__(self):
        self.base.validate(self.y)
        if self.base.order % 2:
            raise DomainError(f"|A| = {self.base.order} must be even")
        if self.base.exponent <= 2:
            raise DomainError(f"A = {self.base.spec} must have exponent greater than 2")
        if not self.base.is_involution(self.y):
            raise DomainError(f"y = {self.y} must have order exactly 2 in {self.base.spec}")

    @property
    def n(self) -> int:
        return 2 * self.base.order

    @property
    def spec(self) -> str:
        coords = ",".join(str(c) for c in self.y.coords)
        return f"dic:{self.base.spec}:y={coords}"

    @cached_property
    def element_order(self) -> Tuple[DicyclicElement, ...]:
        return tuple(
            DicyclicElement(eps, a) for eps in (0, 1) for a in self.base.elements()
        )

    @cached_property
    def _index(self) -> Dict[DicyclicElement, int]:
        return {u: i for i, u in enumerate(self.element_order)}

    def index(self, u: DicyclicElement) -> int:
        try:
            return self._index[u]
        except KeyError:
            raise StructuralError(f"{u} is not an element of {self.spec}") from None

    def element(self, eps: int, *coords: int) -> DicyclicElement:
        if eps not in (0, 1):
            raise StructuralError(f"eps must be 0 or 1, got {eps}")
        return DicyclicElement(eps, self.base.element(*coords))

    def identity(self) -> DicyclicElement:
        return DicyclicElement(0, self.base.identity())

    @property
    def x(self) -> DicyclicElement:
        return DicyclicElement(1, self.base.identity())

    def validate(self, u: DicyclicElement) -> None:
        if u.eps not in (0, 1):
            raise StructuralError(f"eps must be 0 or 1, got {u.eps}")
        self.base.validate(u.a)

    def mul(self, u: DicyclicElement, v: DicyclicElement) -> DicyclicElement:
        return dic_mul(self, u, v)

    def inverse(self, u: DicyclicElement) -> DicyclicElement:
        return dic_inv(self, u)

    @cached_property
    def mul_table(self) -> NDArray[np.intp]:
        """mul_table[u, v] = index of element(u) * element(v)."""
        elems = self.element_order
        table = np.empty((self.n, self.n), dtype=np.intp)
        for i, u in enumerate(elems):
            for j, v in enumerate(elems):
                table[i, j] = self._index[dic_mul(self, u, v)]
        table.flags.writeable = False
        return table

    @cached_property
    def inv_table(self) -> NDArray[np.intp]:
        table = np.array([self._index[dic_inv(self, u)] for u in self.element_order], dtype=np.intp)
        table.flags.writeable = False
        return table

    def element_order_of(self, u: DicyclicElement) -> int:
        power, k = u, 1
        while power != self.identity():
            power = dic_mul(self, power, u)
            k += 1
        return k


def dic_mul(G: DicyclicGroup, u: DicyclicElement, v: DicyclicElement) -> DicyclicElement:
    A = G.base
    b = A.inverse(v.a) if u.eps else v.a
    a = A.mul(u.a, b)
    if u.eps and v.eps:
        a = A.mul(a, G.y)
    return DicyclicElement(u.eps ^ v.eps, a)


def dic_inv(G: DicyclicGroup, u: DicyclicElement) -> DicyclicElement:
    """(a, 0)^-1 = (a^-1, 0); (a, 1)^-1 = (a y, 1)."""
    if u.eps == 0:
        return DicyclicElement(0, G.base.inverse(u.a))
    return DicyclicElement(1, G.base.mul(u.a, G.y))


def element_order_le2_count(G: DicyclicGroup) -> int:
    """m: elements u with u^2 = 1, identity included."""
    identity = G.identity()
    return sum(1 for u in G.element_order if dic_mul(G, u, u) == identity)


def centre(G: DicyclicGroup) -> List[DicyclicElement]:
    """Centre of R: the elements of A of order at most 2."""
    A = G.base
    return [
        DicyclicElement(0, a) for a in A.elements() if A.square(a) == A.identity()
    ]


def right_translation(G: DicyclicGroup, g: DicyclicElement) -> Permutation:
    """Vertex permutation v -> v * g."""
    return Permutation._trusted(G.mul_table[:, G.index(g)].copy())


def iota(G: DicyclicGroup) -> Permutation:
    """Fix A pointwise and send every element of R \\ A to its inverse."""
    images = np.arange(G.n, dtype=np.intp)
    for i, u in enumerate(G.element_order):
        if u.eps == 1:
            images[i] = G.index(dic_inv(G, u))
    return Permutation._trusted(images)


def is_q8_x_c2l(G: DicyclicGroup) -> bool:
    """R is Q8 x C2^l iff A is C4 x C2^l and y is its unique non-identity square."""
    return is_quaternion_type(G.base, G.y)


def quaternion_group(ell: int = 0) -> DicyclicGroup:
    """Q8 x C2^ell presented as Dic(C4 x C2^ell, y=(2,0,...,0))."""
    if ell < 0:
        raise DomainError(f"ell must be non-negative, got {ell}")
    base = AbelianGroup((4,) + (2,) * ell)
    return DicyclicGroup(base, base.element(2, *([0] * ell)))


def check_counts_agree(G: DicyclicGroup) -> bool:
    """m(R) equals |A_2|, since every (a, 1) squares to y != 1."""
    return element_order_le2_count(G) == involution_closure_count(G.base)
