"""Shared exception types.

ValidationError: malformed input (bad JSON, bad field, violated precondition
declared on an operation).  Maps to CLI exit code 2.

SpecialPosition: geometrically degenerate configuration (coincident support
points, non-split fibers, dependent point conditions).  Random generators
catch it and redraw; it is not a bug.
"""


class ValidationError(ValueError):
    pass


class SpecialPosition(RuntimeError):
    pass


class DegenerateInstance(SpecialPosition):
    """A sampled instance failed an openness condition (e.g. a degenerate
    quadruple whose triple multiplication map drops rank)."""
