class CantorSumsError(ValueError):
    """Base error; the CLI turns it into exit status 2."""

    flag: str | None = None

    def __init__(self, message: str, flag: str | None = None):
        super().__init__(message)
        if flag is not None:
            self.flag = flag


class InvalidParameter(CantorSumsError):
    pass


class BoundTooSmall(CantorSumsError):
    flag = "--N"


class GapBoundViolation(CantorSumsError):
    def __init__(self, index: int, gap: int, bound: int):
        super().__init__(
            f"gap z[{index + 1}] - z[{index}] = {gap} violates bound [1, {bound}]",
            flag="--K",
        )
        self.index = index
        self.gap = gap
        self.bound = bound


class NoWitness(CantorSumsError):
    flag = "--x"


class InfeasibleSearch(CantorSumsError):
    pass


class NotSubsetSumSet(CantorSumsError):
    pass


class PreconditionViolation(CantorSumsError):
    pass
