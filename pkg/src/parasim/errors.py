"""Exception hierarchy for parasim."""


class ParasimError(Exception):
    """Base class for all parasim errors."""


class ModelError(ParasimError):
    """A physical-model evaluation produced a non-finite or invalid result."""


class GeometryError(ParasimError):
    """Invalid array geometry (overlapping elements, wrong active count, ...)."""


class ConversionError(ParasimError):
    """Network-parameter conversion failed (singular transform)."""


class FormatError(ParasimError):
    """An impedance file does not conform to the documented format."""


class ResonanceError(ParasimError):
    """The loaded parasitic network is too close to resonance to solve reliably."""

    def __init__(self, condition_number: float):
        self.condition_number = condition_number
        super().__init__(
            f"parasitic network is near-singular "
            f"(condition number {condition_number:.3e} exceeds 1e12)"
        )


class SolverError(ParasimError):
    """A beamforming solve failed (non-positive-definite effective impedance, ...)."""


class ConfigError(ParasimError):
    """Invalid sweep or pattern configuration."""
