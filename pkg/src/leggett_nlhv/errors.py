"""Exception types. All derive from ValueError so callers can catch broadly."""


class InvalidDirectionError(ValueError):
    """A direction on the Poincaré sphere is zero, non-finite or not unit."""


class DomainError(ValueError):
    """An angle lies outside the range a formula is stated for."""


class InvalidQuadratureError(ValueError):
    pass


class InvalidConfigError(ValueError):
    pass
