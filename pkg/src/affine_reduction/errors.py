"""Exception hierarchy shared by the library and the command line front-end."""

from __future__ import annotations


class AffineReductionError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(AffineReductionError):
    """Unsupported root datum, malformed element or class specification."""


class ResourceError(AffineReductionError):
    """A node, path or search budget was exceeded."""


class ContractError(AffineReductionError):
    """An operation was called outside its precondition, or an internal
    certification (length-one simple reflections, minimality, ...) failed."""


class UnsupportedCaseError(AffineReductionError):
    """The request is mathematically meaningful but deliberately not handled."""


class TheoremMismatch(AffineReductionError):
    """A combinatorial prediction disagreed with the tree computation."""
