"""Exception hierarchy shared by all modules."""


class MorsePacketError(Exception):
    """Base class for package errors."""


class DomainError(MorsePacketError, ValueError):
    """Argument outside the mathematical domain of a function."""


class ContractError(MorsePacketError, ValueError):
    """Inputs violate an operation's precondition (shape, normalization, coprimality)."""


class NoBoundStateError(DomainError):
    """The Morse parameters support no bound level (lambda <= 1/2)."""


class LevelError(DomainError):
    """Vibrational level index outside 0..n_max."""


class TruncationError(MorsePacketError):
    """A state has not decayed at the edges of its spatial grid.

    Attributes
    ----------
    left, right : float
        Boundary magnitudes relative to the peak magnitude.
    """

    def __init__(self, message, left=float("nan"), right=float("nan")):
        super().__init__(message)
        self.left = left
        self.right = right


class ToleranceError(MorsePacketError, ArithmeticError):
    """A numerical result fell outside its tolerance (e.g. negative variance)."""


class TruncationWarning(UserWarning):
    """Non-fatal counterpart of TruncationError."""
