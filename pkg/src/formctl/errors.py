"""Exception types shared across the package."""


class SpecError(ValueError):
    """A formation graph or formation spec violates its structural contract."""


class ConfigError(ValueError):
    """A scenario config file is malformed or inconsistent."""
