"""Exception types shared across the package."""


class PlannerError(Exception):
    """Base class for all asdplanner errors."""


class DimensionError(PlannerError):
    """Grid dimensions are invalid or incompatible with an operation."""


class MapFormatError(PlannerError):
    """A map or table file failed to parse or violates value bounds."""


class NoDestinationError(PlannerError):
    """A map has no cell eligible as a destination."""


class DatasetFormatError(PlannerError):
    """A dataset file failed to parse or violates the declared schema."""


class WeightFormatError(PlannerError):
    """A weight bundle failed validation (missing tensor, bad shape, ...)."""
