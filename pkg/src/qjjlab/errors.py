"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Inputs violate a documented precondition."""


class IntegrationError(RuntimeError):
    """A time integration left its validity domain (non-finite state, norm drift)."""
