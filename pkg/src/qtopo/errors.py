"""Exceptions shared across the library and mapped to CLI exit codes."""


class SchemaError(ValueError):
    """Input JSON does not match the expected schema.

    The message carries a JSON-pointer-like path to the offending field,
    e.g. ``/J/2/1: matrix is not symmetric``.
    """


class GuardExceeded(RuntimeError):
    """A brute-force enumeration would exceed the configured term budget."""


class GeometryError(ValueError):
    """Curve geometry is too degenerate to evaluate reliably."""
