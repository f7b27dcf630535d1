"""
Exception hierarchy for the toric blow-up engine.

Two branches:
- InputError: the caller handed us something invalid (CLI exit code 1)
- InvariantViolation: a mathematical mismatch worth a bug report (CLI exit code 2)
"""


class ToricError(Exception):
    """Base class for every error raised by the engine."""


class InputError(ToricError):
    """Invalid input: bad vectors, cones, payloads, polynomials or parameters."""


class InvariantViolation(ToricError):
    """A computed object broke an invariant the theory guarantees."""


class ConfigError(InputError):
    pass


# ============================================================================
# LATTICE
# ============================================================================

class LatticeOverflowError(InputError, OverflowError):
    """A coordinate or determinant left the signed 64-bit range."""


class ZeroVectorError(InputError, ValueError):
    pass


class NotPointedError(InputError):
    """The cone generated by a set of vectors contains a line."""


class DegenerateConeError(InputError):
    """A full-dimensional cone was required but the generators are collinear."""


class InvalidQuotientTypeError(InputError, ValueError):
    pass


# ============================================================================
# SEMIGROUPS AND IDEALS
# ============================================================================

class NotInSemigroupError(InputError):
    """An ideal generator is not a member of its base semigroup (I ⊄ Γ)."""


class BaseNotSaturatedError(InputError):
    pass


class InvalidIndexError(InputError, IndexError):
    pass


# ============================================================================
# POLYNOMIALS AND MATRIX FACTORIZATIONS
# ============================================================================

class PolynomialParseError(InputError):
    pass


class InvalidSplittingError(InputError):
    """x·fx + y·fy + z·fz does not reproduce f."""


class MatrixShapeError(InputError):
    pass


class InvalidColumnsError(InputError):
    pass


class AllZeroMinorsError(InputError):
    """Every 2x2 minor of the chosen columns vanishes."""


class NotMonomialError(InputError):
    pass


class FactorizationError(InvariantViolation):
    """C·D or D·C differs from f·Id."""


# ============================================================================
# RESOLUTION
# ============================================================================

class SelectorNotApplicableError(InputError):
    pass


class NotResolvedError(InputError):
    pass


class ChartNotPointedError(InvariantViolation):
    """A blow-up chart of a valid ideal failed to be a pointed semigroup."""


class InternalMismatchError(InvariantViolation):
    pass


class NonSmoothFanError(InvariantViolation):
    pass
