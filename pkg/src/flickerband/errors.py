"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes, so raising the right class
matters more than the message text.
"""


class FlickerbandError(Exception):
    """Base class for all package errors."""


class ConfigError(FlickerbandError):
    """Invalid configuration: bad ranges, bad parameters, unusable spec."""


class FrameIOError(FlickerbandError):
    """Frame sequences could not be read or written."""


class AlignmentError(FlickerbandError):
    """Alignment could not produce a confident result (flat signatures,
    no content rectangle, ...)."""


class InvariantViolation(FlickerbandError):
    """An internal consistency check failed; indicates a bug, not bad input."""
