"""Exception types shared across the package."""


class ModelDomainError(ValueError):
    """An input left the model's physical domain of validity.

    Raised e.g. for non-positive scalar density, a polarization fraction
    outside [0, 1), an undefined branch sign, or a Wigner sample violating
    the positivity-dominance constraint.
    """


class ConfigError(ValueError):
    """A scenario configuration failed validation (bad or missing field)."""
