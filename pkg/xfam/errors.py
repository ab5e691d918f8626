"""
Exception hierarchy for xfam.
"""


class XfamError(Exception):
    """Base class for every error raised by the library."""


class InvalidComparisonError(XfamError):
    pass


class RangeError(XfamError):
    pass


class ParameterError(XfamError):
    pass


class MembershipError(XfamError):
    pass


class RankError(XfamError):
    pass


class PreconditionError(XfamError):
    pass


class NotMonotoneError(PreconditionError):
    pass


class NotLeftCompressedError(PreconditionError):
    pass


class UndefinedExtentError(XfamError):
    pass


class UnsupportedDepthError(XfamError):
    pass


class ScaleGuardError(XfamError):
    def __init__(self, message: str, estimate: int):
        super().__init__(f"{message} (estimate: {estimate})")
        self.estimate = estimate


class FamilyValidationError(XfamError):
    pass


class NotMaximalError(XfamError):
    def __init__(self, total: int, maximum: int):
        super().__init__(f"tuple is not maximal: sum {total} < bound maximum {maximum}")
        self.total = total
        self.maximum = maximum


class FormatError(XfamError):
    pass
