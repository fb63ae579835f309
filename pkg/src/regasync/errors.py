"""Exception hierarchy shared by every module of the package."""


class ArsError(Exception):
    """Base class for all errors raised by regasync."""


class NonIncreasingTimes(ArsError, ValueError):
    pass


class BadRange(ArsError, IndexError):
    pass


class WidthMismatch(ArsError, ValueError):
    pass


class InputWidthMismatch(WidthMismatch):
    pass


class NotProgressive(ArsError, ValueError):
    pass


class ArityCapExceeded(ArsError, ValueError):
    pass


class NonStabilizing(ArsError):
    """The trajectory falls into a periodic attractor with more than one state."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"state oscillates from t={report.entry_time}: cycle "
                         + " -> ".join("".join(map(str, s)) for s in report.cycle))


class EventBudgetExceeded(ArsError):
    pass


class EmptyCommonInput(ArsError):
    pass


class EmptyIntersection(ArsError):
    pass


class ComposabilityError(ArsError):
    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__(f"{len(self.missing)} state(s) of the first system are not "
                         "inputs of the second system")


class PreconditionFailed(ArsError):
    pass


class DslError(ArsError):
    """Error in workspace or expression text, located by line and column."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)


class DslSyntaxError(DslError):
    pass


class UnknownVariable(DslError):
    pass


class ArityError(DslError):
    pass


class DuplicateName(DslError):
    pass


class UnresolvedReference(DslError):
    pass


class DslWidthMismatch(DslError, WidthMismatch):
    pass
