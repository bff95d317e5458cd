"""Exception hierarchy.

``ParseError`` covers malformed input text; everything else that rejects a
well-formed but invalid value derives from ``ValidationError``. Both are
``ValueError`` subclasses.
"""


class CashFlowError(ValueError):
    pass


class ParseError(CashFlowError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ValidationError(CashFlowError):
    pass


class InvalidDistribution(ValidationError):
    pass


class AllZeroWeights(ValidationError):
    pass


class InconsistentGroupSums(ValidationError):
    pass


class InvalidFlowMatrix(ValidationError):
    pass


class NegativeFlow(InvalidFlowMatrix):
    pass


class DimensionMismatch(InvalidFlowMatrix):
    pass


class DuplicateAgent(InvalidFlowMatrix):
    pass


class ZeroTotalFlow(ValidationError):
    pass


class ZeroInteragentFlow(ValidationError):
    pass


class InvalidPartition(ValidationError):
    pass


class UndefinedMarginal(ValidationError):
    pass


class SingularSystem(ValidationError):
    pass


class InfeasibleParameters(ValidationError):
    pass


class UnreachableBalance(CashFlowError):
    pass
