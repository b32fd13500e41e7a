"""Exception hierarchy shared by every module of the package."""


class NcballError(Exception):
    """Base class for all errors raised by ncball."""


class InvalidParameter(NcballError, ValueError):
    pass


class ReductionBudgetExceeded(NcballError):
    def __init__(self, word, budget):
        self.word = word
        self.budget = budget
        super().__init__(f"rewriting did not terminate within {budget} steps (word {word})")


class IdentityFailed(NcballError):
    def __init__(self, name, residue):
        self.name = name
        self.residue = residue
        super().__init__(f"identity {name!r} left a nonzero residue: {residue}")


class ParseError(NcballError, ValueError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class UnknownGenerator(NcballError, ValueError):
    pass


class NotInvertible(NcballError):
    pass


class NotPositive(NcballError):
    pass


class UnsupportedGraph(NcballError):
    pass


class UnsupportedPresentation(NcballError):
    pass
