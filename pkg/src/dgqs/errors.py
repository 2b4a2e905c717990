"""Exception hierarchy.  ``exit_code`` feeds the CLI's stable exit statuses."""


class DGError(Exception):
    exit_code = 1


class CapExceeded(DGError):
    """A computation needs algebra degrees above the configured cap."""


class MalformedTable(DGError):
    pass


class SignCheckFailed(DGError):
    pass


class InternalSignError(DGError):
    pass


class WindowTooSmall(DGError):
    pass


class NotProjective(DGError):
    pass


class ExpressionFailure(DGError):
    pass


class NotClosed(DGError):
    pass


class QuotientNotFree(DGError):
    pass


class NotQuasiTrivial(DGError):
    pass


class BetaNotBijective(DGError):
    pass


class NotAProjector(DGError):
    pass


class ParseError(DGError):
    exit_code = 2


class ValidationError(DGError):
    exit_code = 3

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class Inconclusive(DGError):
    exit_code = 4

    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class SearchBudgetExceeded(DGError):
    exit_code = 5


class BudgetExceeded(DGError):
    exit_code = 5
