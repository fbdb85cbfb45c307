"""
Named errors raised by the geometry package.

Every error derives from `GeometryError` so `cli.py` can map the whole family
to the usage/precondition exit code in one place.
"""


class GeometryError(Exception):
    """Base class for all library errors."""


# galois

class NonPrime(GeometryError):
    def __init__(self, p):
        super().__init__(f"{p} is not a prime")
        self.p = p


class ReducibleModulus(GeometryError):
    pass


class DegreeMismatch(GeometryError):
    pass


class DivisionByZero(GeometryError, ZeroDivisionError):
    pass


class FieldMismatch(GeometryError):
    pass


class NotASquareOrder(GeometryError):
    pass


class FieldTooLarge(GeometryError):
    pass


# plane

class EqualArguments(GeometryError):
    pass


class SingularMatrix(GeometryError):
    pass


# construct

class CollinearPoints(GeometryError):
    pass


class OrderTooSmall(GeometryError):
    pass


class WrongOrder(GeometryError):
    pass


class OddOrder(GeometryError):
    pass


class SideConditionInfeasible(GeometryError):
    def __init__(self, cid, reason=""):
        target = f"side condition of C{cid}" if cid is not None else "S* frame"
        message = f"{target} admits no choice"
        if reason:
            message = f"{message}: {reason}"
        super().__init__(message)
        self.cid = cid
        self.reason = reason


class InvalidId(GeometryError):
    pass


class NotASquare(GeometryError):
    pass


class NotDoubleBlocking(GeometryError):
    pass


class NotDisjointBlockingPair(GeometryError):
    pass


# resolve / redei

class PreconditionUnmet(GeometryError):
    pass


class NonAffinePoint(GeometryError):
    pass


class NoValidFrame(GeometryError):
    pass


class DegreeUnstable(GeometryError):
    pass


# search

class BudgetExceeded(GeometryError):
    def __init__(self, message, nodes=0, partial=None):
        super().__init__(message)
        self.nodes = nodes
        self.partial = partial


# certificates

class CertificateError(GeometryError):
    pass
