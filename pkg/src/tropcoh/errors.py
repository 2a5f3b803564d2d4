"""Exception hierarchy shared by all modules.

``InputError`` covers malformed or inadmissible input; ``InvariantViolation``
signals that a result contradicts a property that must hold for valid input.
"""


class InputError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass
