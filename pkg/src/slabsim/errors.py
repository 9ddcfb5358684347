"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific type that applies.
"""


class ConfigError(ValueError):
    """Invalid configuration, descriptor, or request (CLI exit code 2)."""


class GeometryError(ConfigError):
    """Array geometry or execution mode violates a structural invariant."""


class CapacityError(Exception):
    """Workload cannot be staged within the configured buffers (CLI exit code 3)."""
