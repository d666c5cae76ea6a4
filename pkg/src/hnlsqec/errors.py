class HnlsQecError(Exception):
    """Base class for library errors."""


class DimensionCapError(HnlsQecError, ValueError):
    """The N-probe Hilbert space would exceed the configured dimension cap."""


class CodeConstructionError(HnlsQecError, ValueError):
    """An error-correcting code cannot be built for the given inputs."""


class KLViolationError(HnlsQecError, ValueError):
    """Knill-Laflamme residuals exceed tolerance; the code does not correct the noise."""


class NumericalError(HnlsQecError, ArithmeticError):
    """A numerical routine produced an unphysical result."""


class ScenarioError(HnlsQecError, ValueError):
    """A scenario file or object failed to parse or validate."""
