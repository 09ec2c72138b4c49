"""
Pytest configuration and fixtures for census tests.
"""

import pytest

from src.config.census_config import get_default_config
from src.core.abelian import AbelianGroup
from src.core.dicyclic import DicyclicGroup, quaternion_group


@pytest.fixture
def config():
    """Default caps and knobs"""
    return get_default_config()


@pytest.fixture
def q8():
    """Q8 as Dic(C4, y=(2))"""
    return quaternion_group(0)


@pytest.fixture
def q8e1():
    """Q8 x C2"""
    return quaternion_group(1)


@pytest.fixture
def dic_c6():
    """Dic(C6, y=(3)), the dicyclic group of order 12"""
    base = AbelianGroup((6,))
    return DicyclicGroup(base, base.element(3))


@pytest.fixture
def dic_c8():
    """Dic(C8, y=(4)), the generalised quaternion group of order 16"""
    base = AbelianGroup((8,))
    return DicyclicGroup(base, base.element(4))


@pytest.fixture
def dic_c4xc2_generic():
    """Dic(C4 x C2, y=(0,1)): order 16 but not Q8 x C2"""
    base = AbelianGroup((4, 2))
    return DicyclicGroup(base, base.element(0, 1))


def _partitions(k, largest=None):
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for part in range(min(k, largest), 0, -1):
        for rest in _partitions(k - part, part):
            yield (part,) + rest


def _factor_tuples(order_left, primes):
    if not primes:
        yield ()
        return
    p, rest = primes[0], primes[1:]
    k = 0
    while p ** k <= order_left:
        for parts in _partitions(k):
            factors = tuple(p ** e for e in parts)
            for tail in _factor_tuples(order_left // p ** k, rest):
                yield factors + tail
        k += 1


@pytest.fixture
def abelian_groups():
    """Generator of every abelian group of order <= max_order, once up to isomorphism"""
    def generate(max_order):
        primes = [p for p in range(2, max_order + 1) if all(p % q for q in range(2, p))]
        for factors in _factor_tuples(max_order, primes):
            if factors:
                yield AbelianGroup(factors)
    return generate


@pytest.fixture
def dicyclic_groups(abelian_groups):
    """Generator of every admissible Dic(A, y) with n = 2|A| <= max_n"""
    def generate(max_n):
        for A in abelian_groups(max_n // 2):
            if A.order % 2 or A.exponent <= 2:
                continue
            for y in A.elements():
                if A.is_involution(y):
                    yield DicyclicGroup(A, y)
    return generate
