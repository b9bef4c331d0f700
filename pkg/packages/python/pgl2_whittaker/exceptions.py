from __future__ import annotations


class Pgl2WhittakerError(Exception):
    """Base exception for all pgl2-whittaker errors."""


class NotPrimeError(Pgl2WhittakerError):
    """Raised when a modulus is not a supported prime."""

    def __init__(self, p: int) -> None:
        self.p = p
        super().__init__(f"Modulus {p} is not a supported prime (expected a prime in [2, 13]).")


class SeriesSyntaxError(Pgl2WhittakerError):
    """Raised when a Laurent expression does not match the input grammar."""

    def __init__(self, text: str, reason: str) -> None:
        self.text = text
        self.reason = reason
        super().__init__(f"Cannot parse Laurent expression {text!r}: {reason}")


class ModulusMismatchError(Pgl2WhittakerError):
    """Raised when operands live over different prime fields."""

    def __init__(self, left: int, right: int) -> None:
        self.left = left
        self.right = right
        super().__init__(f"Operands have different moduli ({left} and {right}).")


class PrecisionError(Pgl2WhittakerError):
    """Raised when a result is not determined at the available precision.

    The computation must be rerun with a higher relative precision.
    """

    def __init__(self, what: str, abs_prec: float | None = None) -> None:
        self.what = what
        self.abs_prec = abs_prec

        message = f"Precision exhausted: {what}"
        if abs_prec is not None:
            message += f" (known modulo t^{abs_prec})"
        message += ". Rerun at a higher precision."

        super().__init__(message)


class InvertibilityError(Pgl2WhittakerError):
    """Raised when inverting zero, or a matrix whose determinant vanishes."""

    def __init__(self, what: str) -> None:
        self.what = what
        super().__init__(f"Cannot invert {what}.")


class NotBorelError(Pgl2WhittakerError):
    """Raised when an upper-triangular element was required."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"Element is not in the Borel subgroup: {reason}.")


class LevelMismatchError(Pgl2WhittakerError):
    """Raised when an object does not belong to the requested level."""

    def __init__(self, expected: int | str, actual: int | str, what: str = "valuation") -> None:
        self.expected = expected
        self.actual = actual
        self.what = what
        super().__init__(f"Level mismatch: expected {what} {expected}, got {actual}.")


class DimensionError(Pgl2WhittakerError):
    """Raised when a matrix has the wrong shape."""

    def __init__(self, rows: int, cols: int) -> None:
        self.rows = rows
        self.cols = cols
        super().__init__(f"Expected a square matrix, got {rows}x{cols}.")


class EnumerationGuardError(Pgl2WhittakerError):
    """Raised when an exhaustive enumeration exceeds the configured bound."""

    def __init__(self, what: str, size: int, bound: int) -> None:
        self.what = what
        self.size = size
        self.bound = bound
        super().__init__(f"Refusing to enumerate {what}: {size} elements exceeds the bound {bound}.")


class UnknownClaimError(Pgl2WhittakerError):
    """Raised when a claim id has no verification suite."""

    def __init__(self, claim_id: str, available: list[str]) -> None:
        self.claim_id = claim_id
        self.available = available
        super().__init__(f"Unknown claim '{claim_id}'. Available claims: {', '.join(available)}")


class VerificationFailedError(Pgl2WhittakerError):
    """Raised by the command line when at least one suite reports a failure."""

    def __init__(self, failed: list[str], output: str = "") -> None:
        self.failed = failed
        self.output = output
        super().__init__(f"Verification failed for: {', '.join(failed)}")
