"""
Exception hierarchy shared by the group, search and census components.
"""


class StructuralError(ValueError):
    """Inputs of incompatible shape (dimension or degree mismatch, bad encoding)."""


class SpecParseError(StructuralError):
    """A group spec string could not be parsed."""


class DomainError(ValueError):
    """A mathematical precondition of an operation does not hold."""


class CapExceededError(RuntimeError):
    """A configured size cap refuses the requested computation."""


class ContainmentViolation(AssertionError):
    """A group that must be contained in Aut(Γ) is not; indicates a bug."""


class BoundViolation(AssertionError):
    """A proven counting bound failed on a concrete instance."""
