"""Exception hierarchy.

Domain errors (bad beta, point outside the interval, ...) derive from
``DomainError`` so the CLI can map them to a single exit status.
"""


class BetaForgeError(Exception):
    pass


class DomainError(BetaForgeError, ValueError):
    pass


class UndecidedError(BetaForgeError):
    """A certified decision could not be reached at the available precision."""


# numeric
class NoSignChange(DomainError):
    pass


class MultipleRoots(DomainError):
    pass


class IncompatibleField(BetaForgeError, TypeError):
    pass


class BetaNotGreaterThanOne(DomainError):
    pass


class SignUndetermined(UndecidedError):
    pass


# geometry
class BetaOutOfRange(DomainError):
    pass


class DigitOutOfRange(DomainError):
    pass


class PointOutsideI(DomainError):
    pass


# constants
class BracketFailure(BetaForgeError):
    pass


# expansions
class InexactPoint(UndecidedError):
    pass


class HorizonTooShort(UndecidedError):
    pass


class BetaBelowThreshold(DomainError):
    pass


class FrontierTooLarge(BetaForgeError):
    def __init__(self, message, counts=None):
        super().__init__(message)
        self.counts = list(counts or [])


# dimension
class NotBelowGoldenRatio(DomainError):
    pass


class DegenerateInterval(BetaForgeError):
    pass


class CertificationFailure(BetaForgeError):
    def __init__(self, message, uncovered=None):
        super().__init__(message)
        self.uncovered = uncovered


class JxNotFound(BetaForgeError):
    pass


# oracle
class TooLarge(BetaForgeError):
    pass


class BetaNotExact(DomainError):
    pass
