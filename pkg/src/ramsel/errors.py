"""Exception types shared across the package."""


class RamselError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(RamselError):
    """Invalid or inconsistent experiment configuration."""


class InfeasibleError(RamselError):
    """A requested computation cannot be carried out at the given dimensions."""


class BdInfeasibleError(InfeasibleError):
    """Block diagonalization has no usable interference null space."""


class SearchCapError(InfeasibleError):
    """State space larger than the configured enumeration cap."""
