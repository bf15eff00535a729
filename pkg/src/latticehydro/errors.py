"""Exception types shared across the package."""


class LatticeHydroError(Exception):
    """Base class for package-specific failures."""


class ConfigurationError(LatticeHydroError):
    """Invalid experiment or grid configuration (detected before any work)."""


class SchemeFailure(LatticeHydroError):
    """A numerical scheme left its admissible range beyond tolerance."""


class TransformError(LatticeHydroError):
    """A profile transform was applied outside its domain of validity."""


class BoxTooSmallError(LatticeHydroError, ValueError):
    """An exclusion box cannot hold the first mapped particle."""
