"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands act on different qubit counts (or a vector has the wrong length)."""


class ParseError(ValueError):
    """Malformed Pauli string, Hamiltonian file, or trace file.

    The message names the offending line and/or character position.
    """


class SchemaError(ParseError):
    """A trace file declares a schema version this package does not read."""


class ConfigError(ValueError):
    """A run configuration is internally inconsistent."""


class CapabilityError(ValueError):
    """A request exceeds a hard capability limit (e.g. dense-solver size)."""


class GrowthStallError(RuntimeError):
    """Ansatz growth ran out of improving candidates above the target residual."""

    def __init__(self, message: str, residual_delta: float):
        super().__init__(message)
        self.residual_delta = residual_delta


class DegenerateSubspaceError(RuntimeError):
    """Every overlap-matrix eigenvalue fell below the filtering threshold."""
