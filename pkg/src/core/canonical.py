"""
The canonical automorphism group B of Cayley graphs on Dic(A, y, x).

Generically B = R x| <iota>, with R acting by right multiplication. When R is
Q8 x C2^l, B = <R, alpha_i, alpha_j, alpha_k> where, under the fixed
isomorphism

    i -> (g4, 0),  j -> (0, 1),  k -> i*j = (g4, 1),  -1 -> (y, 0)

alpha_l swaps l*e and -l*e for every e in E = C2^l and fixes everything
else. Written in Dic coordinates the three maps need no choice of g4:

    alpha_i: (a, 0) <-> (a y, 0)  for a with a^2 != 1
    alpha_j: (a, 1) <-> (a y, 1)  for a with a^2 == 1
    alpha_k: (a, 1) <-> (a y, 1)  for a with a^2 != 1
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple
import logging

import numpy as np
from pydantic import BaseModel, Field

from .cayley import count_inverse_closed, sample_inverse_closed
from .dicyclic import (
    DicyclicElement,
    DicyclicGroup,
    centre,
    dic_inv,
    element_order_le2_count,
    iota,
    is_q8_x_c2l,
    right_translation,
)
from ..config.census_config import get_default_config
from ..search.perm_group import PermGroup, Permutation, compose, is_subgroup

logger = logging.getLogger(__name__)


class CanonicalKind(str, Enum):
    GENERIC = "generic"
    Q8E = "q8e"


@dataclass(frozen=True, eq=False)
class CanonicalB:
    """B together with the pieces it was generated from."""
    group: PermGroup
    kind: CanonicalKind
    regular_generators: Tuple[Permutation, ...]
    iota: Permutation
    alpha_i: Optional[Permutation] = None
    alpha_j: Optional[Permutation] = None
    alpha_k: Optional[Permutation] = None
    m_orbit_size: Optional[int] = None

    def order(self) -> int:
        return self.group.order()


class FactCheck(BaseModel):
    """One named structural fact and its outcome"""
    name: str
    passed: bool
    detail: str = ""


class FactReport(BaseModel):
    """Model for the outcome of verify_canonical_facts"""
    group: str
    kind: CanonicalKind
    n: int
    b_order: int
    sampled: bool = False
    facts: List[FactCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.facts)

    @property
    def failed(self) -> List[str]:
        return [f.name for f in self.facts if not f.passed]


def _a_part_generators(G: DicyclicGroup) -> List[Permutation]:
    """Right translations by the unit vectors of A."""
    units = []
    for i in range(G.base.rank):
        coords = [0] * G.base.rank
        coords[i] = 1
        units.append(right_translation(G, G.element(0, *coords)))
    return units


def regular_representation(G: DicyclicGroup) -> PermGroup:
    """R acting on its own element enumeration by right multiplication."""
    return PermGroup(G.n, _a_part_generators(G) + [right_translation(G, G.x)])


def _swap_by_y(G: DicyclicGroup, eps: int, select: Callable[[DicyclicElement], bool]) -> Permutation:
    images = np.arange(G.n, dtype=np.intp)
    A = G.base
    for idx, u in enumerate(G.element_order):
        if u.eps == eps and select(u):
            images[idx] = G.index(DicyclicElement(eps, A.mul(u.a, G.y)))
    return Permutation._trusted(images)


def quaternion_alphas(G: DicyclicGroup) -> Tuple[Permutation, Permutation, Permutation]:
    """alpha_i, alpha_j, alpha_k for R = Q8 x C2^l."""
    A = G.base

    def in_a2(u: DicyclicElement) -> bool:
        return A.square(u.a) == A.identity()

    alpha_i = _swap_by_y(G, 0, lambda u: not in_a2(u))
    alpha_j = _swap_by_y(G, 1, in_a2)
    alpha_k = _swap_by_y(G, 1, lambda u: not in_a2(u))
    return alpha_i, alpha_j, alpha_k


def build_canonical_B(G: DicyclicGroup) -> CanonicalB:
    regular = tuple(regular_representation(G).generators)
    iota_perm = iota(G)
    if is_q8_x_c2l(G):
        alpha_i, alpha_j, alpha_k = quaternion_alphas(G)
        group = PermGroup(G.n, regular + (alpha_i, alpha_j, alpha_k))
        m_size = len(centre(G))
        return CanonicalB(
            group=group,
            kind=CanonicalKind.Q8E,
            regular_generators=regular,
            iota=iota_perm,
            alpha_i=alpha_i,
            alpha_j=alpha_j,
            alpha_k=alpha_k,
            m_orbit_size=m_size,
        )
    group = PermGroup(G.n, regular + (iota_perm,))
    return CanonicalB(
        group=group,
        kind=CanonicalKind.GENERIC,
        regular_generators=regular,
        iota=iota_perm,
    )


# ----------------------------------------------------------------------
# structural facts


def _left_translation(G: DicyclicGroup, g: int) -> Permutation:
    return Permutation._trusted(G.mul_table[g, :].copy())


def _commutes(p: Permutation, q: Permutation) -> bool:
    return compose(p, q) == compose(q, p)


def centre_of_B(G: DicyclicGroup, B: CanonicalB) -> List[Permutation]:
    """
    Z(B), computed exactly.

    B contains the right regular R, so Z(B) lies in the centraliser of R in
    Sym(R), which is the left regular representation; only those n
    candidates are tested.
    """
    gens = B.group.generators
    return [
        lam for lam in (_left_translation(G, g) for g in range(G.n))
        if lam in B.group and all(_commutes(lam, s) for s in gens)
    ]


def _brute_force_centre(G: DicyclicGroup) -> List[int]:
    mul = G.mul_table
    return [z for z in range(G.n) if np.array_equal(mul[z, :], mul[:, z])]


def _elements_to_check(
    group: PermGroup,
    config: Dict[str, Any]
) -> Tuple[Iterable[Permutation], bool]:
    verification = config['verification']
    if group.order() <= verification['exhaustive_order_limit']:
        return group.elements(), False
    rng = np.random.default_rng(verification['seed'])
    words = (group.random_element(rng) for _ in range(verification['random_words']))
    return words, True


def _order_divides_4(p: Permutation) -> bool:
    images = p.images
    return bool((images[images[images[images]]] == np.arange(p.degree)).all())


def _check_quaternion_relations(G: DicyclicGroup) -> FactCheck:
    A = G.base
    i = next(DicyclicElement(0, a) for a in A.elements() if A.square(a) != A.identity())
    j = G.x
    k = G.mul(i, j)
    one = G.identity()
    minus_one = DicyclicElement(0, G.y)

    def power(u: DicyclicElement, e: int) -> DicyclicElement:
        out = one
        for _ in range(e):
            out = G.mul(out, u)
        return out

    relations = {
        "i^4 = 1": power(i, 4) == one,
        "i^2 = j^2": power(i, 2) == power(j, 2),
        "i^2 = -1": power(i, 2) == minus_one,
        "i^j = i^-1": G.mul(G.mul(dic_inv(G, j), i), j) == dic_inv(G, i),
        "k^2 = -1": power(k, 2) == minus_one,
    }
    broken = [name for name, ok in relations.items() if not ok]
    return FactCheck(
        name="quaternion_relations",
        passed=not broken,
        detail=f"i={i}, j={j}, k={k}" + (f"; broken: {', '.join(broken)}" if broken else ""),
    )


def _common_facts(G: DicyclicGroup, B: CanonicalB, config: Dict[str, Any]) -> List[FactCheck]:
    facts = []
    R = regular_representation(G)
    facts.append(FactCheck(
        name="regular_in_B",
        passed=is_subgroup(R, B.group),
        detail=f"|R| = {R.order()}",
    ))

    expected_centre = [G.index(z) for z in centre(G)]
    actual_centre = _brute_force_centre(G)
    facts.append(FactCheck(
        name="centre_of_R",
        passed=sorted(expected_centre) == actual_centre,
        detail=f"|Z(R)| = {len(actual_centre)}",
    ))

    m = element_order_le2_count(G)
    total = count_inverse_closed(G)
    facts.append(FactCheck(
        name="inverse_closed_count",
        passed=total == 2 ** ((m + G.n) // 2) and (m + G.n) % 2 == 0,
        detail=f"m = {m}, count = {total}",
    ))

    verification = config['verification']
    images = B.iota.images
    moved = []
    for draw in range(verification['iota_sample_sets']):
        S = sample_inverse_closed(G, [verification['seed'], draw])
        members = np.array(S.members(), dtype=np.intp)
        if set(images[members].tolist()) != set(members.tolist()):
            moved.append(S.to_hex())
    facts.append(FactCheck(
        name="iota_fixes_inverse_closed_sets",
        passed=not moved,
        detail=f"{verification['iota_sample_sets']} sampled sets" + (f"; moved: {moved[:4]}" if moved else ""),
    ))
    return facts


def _q8e_facts(G: DicyclicGroup, B: CanonicalB, config: Dict[str, Any]) -> Tuple[List[FactCheck], bool]:
    n = G.n
    b_order = B.order()
    R_order = regular_representation(G).order()
    facts = [
        FactCheck(name="order_8n", passed=b_order == 8 * n, detail=f"|B| = {b_order}, n = {n}"),
        FactCheck(name="index_over_R", passed=b_order // R_order == 8 and b_order % R_order == 0,
                  detail=f"|B:R| = {b_order / R_order:g}"),
    ]

    M = centre(G)
    m_translations = {right_translation(G, z) for z in M}
    Z = centre_of_B(G, B)
    facts.append(FactCheck(
        name="centre_is_M",
        passed=set(Z) == m_translations,
        detail=f"|Z(B)| = {len(Z)}, |M| = {len(M)}",
    ))
    facts.append(FactCheck(
        name="m_is_quarter_n",
        passed=4 * len(M) == n and B.m_orbit_size == len(M),
        detail=f"|M| = {len(M)}",
    ))

    elements, sampled = _elements_to_check(B.group, config)
    bad = next((g for g in elements if not _order_divides_4(g)), None)
    facts.append(FactCheck(
        name="exponent_4",
        passed=bad is None,
        detail=("sampled" if sampled else "exhaustive") + ("" if bad is None else f"; order {bad.order()} found"),
    ))

    facts.append(FactCheck(
        name="iota_is_alpha_j_alpha_k",
        passed=B.iota == compose(B.alpha_j, B.alpha_k),
    ))
    facts.append(FactCheck(
        name="alphas_are_involutions",
        passed=all(a.order() == 2 for a in (B.alpha_i, B.alpha_j, B.alpha_k)),
    ))

    count = count_inverse_closed(G)
    facts.append(FactCheck(
        name="count_is_2_to_5n_over_8",
        passed=(5 * n) % 8 == 0 and count == 2 ** (5 * n // 8),
        detail=f"count = {count}",
    ))
    facts.append(_check_quaternion_relations(G))
    return facts, sampled


def _generic_facts(G: DicyclicGroup, B: CanonicalB, config: Dict[str, Any]) -> Tuple[List[FactCheck], bool]:
    n = G.n
    b_order = B.order()
    R = regular_representation(G)
    facts = [
        FactCheck(name="order_2n", passed=b_order == 2 * n, detail=f"|B| = {b_order}, n = {n}"),
        FactCheck(
            name="iota_outside_R",
            passed=not B.iota.is_identity() and B.iota(0) == 0 and B.iota not in R,
        ),
    ]

    a_part = _a_part_generators(G)
    C = PermGroup(n, a_part + [B.iota])
    facts.append(FactCheck(
        name="C_abelian",
        passed=C.is_abelian() and C.order() == n,
        detail=f"|C| = {C.order()}",
    ))

    A_reg = PermGroup(n, a_part)
    t = compose(B.iota, right_translation(G, G.x))
    D = PermGroup(n, a_part + [t])
    elements, sampled = _elements_to_check(D, config)
    outside = 0
    broken = 0
    for g in elements:
        if g in A_reg:
            continue
        outside += 1
        g_inv = g.inverse()
        if not compose(g, g).is_identity() or not all(
            compose(compose(g_inv, r), g) == r.inverse() for r in a_part
        ):
            broken += 1
    facts.append(FactCheck(
        name="D_generalised_dihedral",
        passed=D.order() == n and broken == 0,
        detail=f"|D| = {D.order()}, {outside} elements outside A checked"
               + (" (sampled)" if sampled else "") + (f", {broken} fail" if broken else ""),
    ))
    return facts, sampled


def verify_canonical_facts(
    G: DicyclicGroup,
    B: CanonicalB,
    config: Optional[Dict[str, Any]] = None
) -> FactReport:
    """
    Check the structural facts of B; every check is reported by name.

    Element-wise checks run over the whole group when it has at most
    verification.exhaustive_order_limit elements and over
    verification.random_words uniform random elements otherwise.
    """
    config = config or get_default_config()
    if B.kind is CanonicalKind.Q8E:
        facts, sampled = _q8e_facts(G, B, config)
    else:
        facts, sampled = _generic_facts(G, B, config)
    facts.extend(_common_facts(G, B, config))

    report = FactReport(
        group=G.spec,
        kind=B.kind,
        n=G.n,
        b_order=B.order(),
        sampled=sampled,
        facts=facts,
    )
    if sampled:
        logger.warning(f"{G.spec}: element checks on |B| = {report.b_order} were sampled, not exhaustive")
    for name in report.failed:
        logger.error(f"{G.spec}: structural fact {name} failed")
    return report
