"""Exception types shared across the package."""


class GridTooCoarse(ValueError):
    """Energy grid spacing too coarse for the requested time window (aliasing risk)."""


class BoundaryAmbiguity(ValueError):
    """Quantity requested exactly on a potential-segment edge; displace by +/- eps."""


class DivergenceWarning(FloatingPointError):
    """Evanescent growth exponent would overflow; the requested translation is in
    the non-physical regime (amplitude grows without bound)."""


class ZeroArrival(ArithmeticError):
    """Arrival probability numerically zero; the time density is undefined."""


class GridMismatch(ValueError):
    """Two distributions do not share the same time grid."""


class UnstableConfig(ValueError):
    """Grid-solver configuration violates its resolution/step-size bounds."""


class ResonancePole(ArithmeticError):
    """Transmission denominator vanished (cannot happen for real physical input)."""


class ConfigError(ValueError):
    """Invalid scenario configuration, with the offending field named."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
