"""Exception types.

``ValueError`` signals bad input; ``QrcsError`` subclasses signal a
computation that cannot produce a meaningful number.
"""


class QrcsError(Exception):
    """Base class for computation failures."""


class GridTooDenseError(QrcsError):
    pass


class DenominatorUnderflowError(QrcsError):
    pass


class TargetInvisibleError(QrcsError):
    pass
