"""Exception hierarchy shared by every module of the package."""


class BatchGrowError(Exception):
    """Base class; the CLI turns any of these into a nonzero exit."""


class DisconnectedGraph(BatchGrowError):
    pass


class DisconnectedQuotient(BatchGrowError):
    pass


class TooLarge(BatchGrowError):
    pass


class ParseError(BatchGrowError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyGraph(BatchGrowError):
    pass


class GenerationFailed(BatchGrowError):
    pass


class StalledDisconnected(BatchGrowError):
    pass


class InfeasibleK(BatchGrowError):
    pass


class TuningFailed(BatchGrowError):
    pass
