"""Exception hierarchy for lclwork.

Library code raises these; only the CLI maps them to exit codes.
"""


class LclworkError(Exception):
    """Base class for all lclwork errors."""


class GroupError(LclworkError, ValueError):
    """Invalid group element, multiplication table, or action."""


class SizeLimitError(LclworkError):
    """A configured enumeration or element-count limit was exceeded."""


class ColoringError(LclworkError, ValueError):
    """A coloring does not satisfy the precondition of an operation."""


class FreenessError(ColoringError):
    """Two group elements were identified with the same point of an orbit."""


class WitnessError(LclworkError):
    """A schematic witness failed its separation verification."""


class InvariantViolation(LclworkError):
    """A mathematical invariant that must always hold was falsified.

    Raising this indicates an implementation bug, never bad input.
    """


class ConfigError(LclworkError, ValueError):
    """The run configuration could not be read or validated."""


class CertificateError(LclworkError, ValueError):
    """A certificate could not be read or has an unknown schema."""
