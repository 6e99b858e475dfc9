"""
Exceptions raised by the R_t estimator.

Messages start with a fixed phrase so callers can match on them.
"""


class EstimationError(ValueError):
    """Base class for every estimator failure."""


class EmptyInputError(EstimationError):
    def __init__(self, detail: str = ""):
        super().__init__(f"empty input{': ' + detail if detail else ''}")


class CutoffNotReachedError(EstimationError):
    def __init__(self, cutoff: float):
        self.cutoff = cutoff
        super().__init__(f"series never reaches cutoff {cutoff:g}")


class InvalidPoissonArgumentError(EstimationError):
    def __init__(self, detail: str):
        super().__init__(f"invalid Poisson argument: {detail}")


class PosteriorCollapsedError(EstimationError):
    def __init__(self, date=None):
        self.date = date
        where = f" on {date}" if date is not None else ""
        super().__init__(f"posterior collapsed{where}")


class NoViableSigmaError(EstimationError):
    def __init__(self, candidates):
        self.candidates = tuple(candidates)
        super().__init__(f"no viable sigma among {list(self.candidates)}")


class InsufficientDataError(EstimationError):
    def __init__(self, n_days: int):
        self.n_days = n_days
        super().__init__(f"insufficient data: {n_days} day(s) after trimming, need at least 2")
