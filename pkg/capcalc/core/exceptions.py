# capcalc/core/exceptions.py
"""Error hierarchy shared by the services and the CLI.

Every error carries the process exit code the CLI reports for it.
"""


class CapcalcError(Exception):
    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InvalidInputError(CapcalcError, ValueError):
    """Malformed text, JSON or arguments."""
    exit_code = 1


class DegreeMismatchError(InvalidInputError):
    def __init__(self, left: int, right: int):
        super().__init__(f"degree mismatch: n={left} vs n={right}")
        self.left = left
        self.right = right


class InvalidIndicesError(InvalidInputError):
    pass


class OutsideConeError(CapcalcError, ValueError):
    exit_code = 2

    def __init__(self, message: str = "not in the symplectic K₀-cone (or on its boundary)"):
        super().__init__(message)


class OutsideDomainError(OutsideConeError):
    """Tropical evaluation requested outside the c₁-nef part of the reduced cone."""


class UnsupportedError(CapcalcError, ValueError):
    exit_code = 1


class NotDelzantError(InvalidInputError):
    pass


class UncertifiedError(CapcalcError):
    exit_code = 3


class VerificationError(CapcalcError):
    exit_code = 1


class ExpansionError(CapcalcError, RuntimeError):
    exit_code = 1
