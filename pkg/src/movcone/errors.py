"""Exception hierarchy shared by every module.

Each failure mode the CLI distinguishes maps onto one branch of this tree,
so callers can catch broadly (``MovconeError``) or narrowly.
"""

from __future__ import annotations


class MovconeError(Exception):
    """Root of all library errors."""


# exact arithmetic
class NoRealRootError(MovconeError, ArithmeticError):
    pass


class DegenerateSpectrumError(MovconeError, ArithmeticError):
    pass


class NoRealSpectrumError(MovconeError, ArithmeticError):
    pass


# catalog and cases
class NotCalabiYauError(MovconeError, ValueError):
    pass


class UnknownCaseError(MovconeError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class CatalogError(MovconeError, ValueError):
    pass


class MalformedCaseError(MovconeError, ValueError):
    pass


class ProfileInconsistencyError(MovconeError, ValueError):
    pass


# solvers
class SolverError(MovconeError):
    """A birational solver could not produce a map."""


class NoFlopSolutionError(SolverError):
    pass


class IrrationalFlopError(SolverError):
    pass


class AmbiguousSymmetryError(SolverError):
    pass


class CompositionMismatchError(SolverError):
    pass


class NonHyperbolicError(SolverError):
    """Raised for matrices of finite order or parabolic type."""


# chamber verification
class VerificationError(MovconeError):
    """A recomputed certificate disagreed with the expected structure."""


class UnrecognizedFibrationError(VerificationError):
    pass


class ChamberVerificationError(VerificationError):
    pass


class ConeConjectureError(VerificationError):
    pass
