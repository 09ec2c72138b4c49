"""
Group spec strings accepted on the command line and recorded in census output.

    C4xC2            abelian group (factors joined by 'x', case-insensitive)
    dic:C4xC2:y=2,0  Dic(A, y, x) with y given by its coordinates
    q8e:l            Q8 x C2^l, i.e. dic:C4xC2^l with y = (2,0,...,0)
"""

import re

from .abelian import AbelianGroup
from .dicyclic import DicyclicGroup, quaternion_group
from .exceptions import DomainError, SpecParseError

_DIC_RE = re.compile(r"^dic:([^:]+):y=([-\d,\s]+)$", re.IGNORECASE)
_Q8E_RE = re.compile(r"^q8e:(\d+)$", re.IGNORECASE)


def parse_group_spec(text: str) -> DicyclicGroup:
    """
    Parse a dicyclic group spec.

    Raises:
        SpecParseError: malformed text
        DomainError: well-formed but (A, y) violates the dicyclic preconditions
    """
    cleaned = text.strip()
    match = _Q8E_RE.match(cleaned)
    if match:
        return quaternion_group(int(match.group(1)))

    match = _DIC_RE.match(cleaned)
    if not match:
        raise SpecParseError(
            f"unrecognised group spec {text!r}; expected 'dic:<A>:y=<coords>' or 'q8e:<l>'"
        )
    base = AbelianGroup.parse(match.group(1))
    try:
        coords = [int(c) for c in match.group(2).split(",") if c.strip()]
    except ValueError as exc:
        raise SpecParseError(f"malformed y coordinates in {text!r}") from exc
    if len(coords) != base.rank:
        raise SpecParseError(
            f"y has {len(coords)} coordinates but {base.spec} has {base.rank} factors"
        )
    y = base.element(*coords)
    try:
        return DicyclicGroup(base, y)
    except DomainError as exc:
        raise DomainError(f"{text!r}: {exc}") from exc
