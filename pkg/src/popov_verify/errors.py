from __future__ import annotations


class VerificationError(Exception):
    """Base class for every error raised by the package."""


class InvalidSpec(VerificationError, ValueError):
    pass


class DomainError(VerificationError, ValueError):
    pass


class DomainNotCovered(VerificationError):
    pass


class PoleAt(VerificationError, ValueError):
    def __init__(self, where: complex, message: str = "") -> None:
        self.where = where
        super().__init__(message or f"pole at {where}")


class RangeExceeded(VerificationError):
    pass


class NoConvergence(VerificationError):
    pass


class TolUnreachable(VerificationError):
    pass


class HorizonOverflow(VerificationError):
    pass


class FailedToFindTau0(VerificationError):
    pass
