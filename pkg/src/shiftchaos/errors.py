"""Exception types shared across the package."""


class ShiftChaosError(Exception):
    """Base class for all package-specific errors."""


class HorizonError(ShiftChaosError):
    """A bounded stream was asked for symbols beyond its declared horizon."""


class ResourceCapError(ShiftChaosError):
    """An exhaustive enumeration would exceed the configured word cap."""


class CapabilityError(ShiftChaosError):
    """The structure does not support the requested operation."""


class ValidationError(ShiftChaosError):
    """A configuration value violates the schema or a structure invariant.

    ``field`` holds the path of the offending entry, e.g. ``distances[0][1]``.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
