"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """A scenario/config value violates an invariant.

    Carries the full list of violations so a config file can be fixed in
    one pass instead of error-by-error.
    """

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class InvalidArgument(ValueError):
    """An operation was called with an argument outside its domain."""


class InternalConsistencyError(RuntimeError):
    """A should-be-impossible state was reached (e.g. overlapping footprints)."""
