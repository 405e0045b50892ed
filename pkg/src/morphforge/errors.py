"""Exception hierarchy shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 2, DataError and
StructuralError -> 3, NumericError -> 4.
"""


class MorphforgeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(MorphforgeError):
    """Invalid or inconsistent configuration."""


class DataError(MorphforgeError):
    """Missing or malformed input data (images, landmarks, manifests, scores)."""


class StructuralError(MorphforgeError):
    """Shape, cardinality, or layout mismatch between otherwise valid inputs."""


class NumericError(MorphforgeError):
    """Non-finite values or a failed numeric computation."""
