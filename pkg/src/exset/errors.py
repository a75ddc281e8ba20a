"""Exception hierarchy shared by every layer of the construction."""

from __future__ import annotations


class ExsetError(Exception):
    """Base class; ``code`` is the stable machine-readable name."""

    code = "Error"

    def __init__(self, message: str = "", *, location: str | None = None) -> None:
        self.location = location
        super().__init__(message or self.code)

    def __str__(self) -> str:
        msg = super().__str__()
        if self.location:
            return f"{self.code} at {self.location}: {msg}"
        return f"{self.code}: {msg}"


class ZeroDivisor(ExsetError, ZeroDivisionError):
    code = "ZeroDivisor"


class DegenerateDirection(ExsetError, ValueError):
    code = "DegenerateDirection"


class DegenerateConfiguration(ExsetError, ValueError):
    code = "DegenerateConfiguration"


class SteeringStuck(ExsetError, RuntimeError):
    code = "SteeringStuck"


class NotPinned(ExsetError, KeyError):
    code = "NotPinned"


class ValidationError(ExsetError, ValueError):
    """Problem-level validation failure. Subclasses carry the code."""

    code = "ValidationError"


class BadRational(ValidationError):
    code = "BadRational"


class ArityMismatch(ValidationError):
    code = "ArityMismatch"


class DuplicatePoint(ValidationError):
    code = "DuplicatePoint"


class NotConjClosed(ValidationError):
    code = "NotConjClosed"


class OriginMissing(ValidationError):
    code = "OriginMissing"


class OverlapSV(ValidationError):
    code = "OverlapSV"


class BadProblem(ValidationError):
    """Structural problems in a problem file not covered by a named code."""

    code = "BadProblem"


class ValidationErrors(ValidationError):
    """Aggregate of several validation failures, reported together."""

    def __init__(self, errors: list[ValidationError]) -> None:
        self.errors = list(errors)
        self.code = self.errors[0].code if self.errors else "ValidationError"
        super().__init__("; ".join(str(e) for e in self.errors))

    def __str__(self) -> str:
        return "\n".join(str(e) for e in self.errors)
