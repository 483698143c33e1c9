"""Exception hierarchy shared by all agr modules."""

from typing import Optional


class AutomatonGroupError(Exception):
    """Base class for every error raised by agr."""
    pass


class MachineSyntaxError(AutomatonGroupError):
    """Raised on a malformed line of a MAF document."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NotInvertible(AutomatonGroupError):
    """Raised when the outputs at a state are not a permutation of the alphabet."""

    def __init__(self, state: str):
        super().__init__(f"state '{state}' is not invertible")
        self.state = state


class UnknownState(AutomatonGroupError):
    """Raised on a transition to an undeclared state."""

    def __init__(self, name: str):
        super().__init__(f"unknown state '{name}'")
        self.name = name


class LetterOutOfRange(AutomatonGroupError):
    """Raised when a word contains a letter outside 1..p."""

    def __init__(self, letter, p: int):
        super().__init__(f"letter {letter!r} outside 1..{p}")
        self.letter = letter
        self.p = p


class AlphabetMismatch(AutomatonGroupError):
    """Raised when combining machines over different alphabets."""
    pass


class BadAlphabet(AutomatonGroupError):
    """Raised for alphabets with fewer than two letters."""
    pass


class LevelTooLarge(AutomatonGroupError):
    """Raised when p**level exceeds the configured point limit."""
    pass


class QuotientLimitExceeded(AutomatonGroupError):
    """Raised when a branch subgroup index does not stabilize within the level limit."""
    pass


class BallTooLarge(AutomatonGroupError):
    """Raised when an enumeration of a ball (or of tuples over it) is over budget."""
    pass


class BudgetExceeded(AutomatonGroupError):
    """Raised when a canonical machine outgrows the state budget."""

    def __init__(self, limit: int, size: Optional[int] = None):
        detail = f" (reached {size})" if size is not None else ""
        super().__init__(f"state budget {limit} exceeded{detail}")
        self.limit = limit
        self.size = size


class OrderMismatch(AutomatonGroupError):
    """Raised when h**n is not trivial for the requested tuple length n."""
    pass


class BadTupleLength(AutomatonGroupError):
    """Raised when a tuple length is not a positive multiple of p."""
    pass


class NoOrbit(AutomatonGroupError):
    """Raised when no orbit of full length is found within the level limit."""
    pass


class OrderNotMultiple(AutomatonGroupError):
    """Raised when the order of h is not a multiple of the tuple length."""
    pass


class ExpressionError(AutomatonGroupError):
    """Raised on a word expression that does not parse."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownGenerator(AutomatonGroupError):
    """Raised when an expression names a generator the group does not have."""

    def __init__(self, name: str):
        super().__init__(f"unknown generator '{name}'")
        self.name = name


class UnknownGroup(AutomatonGroupError):
    """Raised when a group selector is neither a built-in name nor a file."""
    pass


class ContractionTooWeak(AutomatonGroupError):
    """Raised when a certified radius is requested but 2**n * eta >= 1."""
    pass
