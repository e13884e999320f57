"""
Exception hierarchy for the superregular matrix toolkit.

Library code raises these; the CLI maps them onto exit codes.
"""

from typing import Any, List, Optional


class SupregError(Exception):
    """Base class for all toolkit errors."""


# Field arithmetic

class FieldError(SupregError):
    """Problems with prime-field construction or arithmetic."""


class InvalidModulus(FieldError, ValueError):
    """Modulus is not an odd prime."""


class ModulusMismatch(FieldError, ValueError):
    """Operands live in different prime fields."""


class ZeroInverse(FieldError, ZeroDivisionError):
    """Inverse of zero requested."""


class DenominatorZeroModP(FieldError, ZeroDivisionError):
    """A rational literal has a denominator divisible by p."""


class NonResidue(FieldError, ValueError):
    """Square root requested for a quadratic non-residue."""


class DegenerateLinear(FieldError, ValueError):
    """Linear equation c*x + d = 0 with c = 0."""

    def __init__(self, message: str, constant_is_zero: bool):
        super().__init__(message)
        self.constant_is_zero = constant_is_zero


class ParseError(SupregError, ValueError):
    """Malformed rational literal or entry list."""


# Matrices and polynomials

class MatrixIndexError(SupregError, IndexError):
    """Row/column index outside [1, gamma] or malformed minor index."""


class ZeroScalar(SupregError, ValueError):
    """Diagonal scaling by zero."""


class DegreeTooHigh(SupregError, ValueError):
    """Polynomial is not linear in the split variable."""


class CensusMismatch(SupregError):
    """Minor counts disagree with the closed-form count."""


# Forbidden sets

class PrefixLengthMismatch(SupregError, ValueError):
    """Prefix does not have gamma - 1 entries."""


class DenominatorVanishes(SupregError, ZeroDivisionError):
    """A closed-form forbidden-set expression has a zero denominator."""

    def __init__(self, gamma: int, index: int, expression: str):
        super().__init__(
            f"S_{gamma} expression #{index} ({expression}) has a vanishing denominator"
        )
        self.gamma = gamma
        self.index = index
        self.expression = expression


class DeadPrefix(SupregError):
    """Some minor vanishes for every choice of the next entry."""


# Constructions

class FieldTooSmall(SupregError, ValueError):
    """No construction exists for this order over such a small field."""


class VariantInapplicable(SupregError, ValueError):
    """The requested construction variant does not apply at this prime."""


class NoWitness(SupregError, LookupError):
    """No embedded witness for the requested (gamma, p)."""


class ConstructionFailed(SupregError):
    """Every candidate of a construction failed verification."""


class ChecksumMismatch(SupregError):
    """Witness data file does not match its recorded checksum."""


# Search

class VerificationFailed(SupregError):
    """A search emitted a matrix that fails the full superregularity check."""


class DeadEnd(SupregError):
    """Greedy extension found no admissible value at some depth."""

    def __init__(self, depth: int, prefix: List[int], forbidden: Optional[List[int]] = None,
                 detail: Any = None):
        forbidden = forbidden or []
        super().__init__(
            f"dead end at depth {depth}: prefix {prefix} leaves no admissible a_{depth} "
            f"({len(forbidden)} forbidden values)"
        )
        self.depth = depth
        self.prefix = prefix
        self.forbidden = forbidden
        self.detail = detail


class InvalidPrefix(SupregError, ValueError):
    """Prefix violates a precondition (a_1 = 0, or not normalised where required)."""
