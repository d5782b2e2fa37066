"""Exception hierarchy shared by the numerical modules."""


class NCJuliaError(Exception):
    pass


class DimensionError(NCJuliaError, ValueError):
    """Input matrices have incompatible or non-square shapes."""


class DomainError(NCJuliaError, ValueError):
    """A point lies outside the domain of the requested operation."""

    def __init__(self, message, min_eigenvalue=None, smallest_singular_value=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue
        self.smallest_singular_value = smallest_singular_value


class ConditioningError(DomainError):
    """Matrix too ill-conditioned to invert or take an inverse root of."""

    def __init__(self, message, condition_number=None, **kw):
        super().__init__(message, **kw)
        self.condition_number = condition_number


class NumericError(NCJuliaError, ArithmeticError):
    """A LAPACK routine failed to converge."""


class PreconditionError(NCJuliaError, ValueError):
    pass
