"""Exception types shared across the library."""


class GroupoidError(Exception):
    """Base class for all library errors."""


class InvalidEquivalencePair(GroupoidError):
    pass


class SchurianRequired(GroupoidError):
    pass


class VertexSetMismatch(GroupoidError):
    pass


class NotConnected(GroupoidError):
    pass


class NotNormal(GroupoidError):
    pass


class NotEpimorphism(GroupoidError):
    pass


class EmptyGroupoid(GroupoidError):
    pass


class NotSplitFIT(GroupoidError):
    pass


class CompatibilityFailure(GroupoidError):
    pass


class CommutationFailure(GroupoidError):
    pass


class IncompatibleMorphism(GroupoidError):
    pass


class PushForwardNotCoarse(GroupoidError):
    pass


class TargetNotFIT(GroupoidError):
    pass


class ComponentVertexCondition(GroupoidError):
    pass


class NoFactorization(GroupoidError):
    """Internal falsification: a split FIT sequence must factor every arrow as N·H·N."""


class ParseError(GroupoidError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
