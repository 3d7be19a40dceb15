"""Exception hierarchy for infldiag."""


class InfldiagError(Exception):
    """Base class for all library errors."""


class InvalidSubsetError(InfldiagError):
    """Row subset is out of range, duplicated, or would leave too few rows."""


class ColumnDegenerateError(InfldiagError):
    """One or more predictor columns have zero variance."""

    def __init__(self, columns, message=None):
        self.columns = tuple(columns)
        super().__init__(message or f"zero-variance columns (1-based): {self.columns}")


class InvalidSpecError(InfldiagError):
    """A selector / procedure specification is out of contract."""


class ConvergenceError(InfldiagError):
    """An iterative solver failed to converge; carries the last iterate."""

    def __init__(self, message, last_iterate=None):
        self.last_iterate = last_iterate
        super().__init__(message)


class DegenerateNoiseError(InfldiagError):
    """Scaled-lasso noise estimate collapsed to (numerical) zero."""


class DegenerateCorrelationError(InfldiagError):
    """A leave-one-out variance is zero so a marginal correlation is undefined."""

    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"degenerate correlation for column {column}")


class DegenerateClusterError(InfldiagError):
    """Clustering collapsed (empty cluster after retries, or no separation)."""


class AmbiguousEmbeddingError(InfldiagError):
    """Neighbor graph for spectral clustering has too many components."""


class ConfigError(InfldiagError):
    """Bad CLI flags or simulation configuration."""
