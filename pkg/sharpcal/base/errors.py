"""Define the sharpcal exception hierarchy

Every error raised on purpose by the package derives from SharpcalError and
carries the command-line exit code it maps to, so that the front end never
needs its own lookup table.
"""

from typing import Any, Dict, List, Optional


class SharpcalError(Exception):
    """Base class for all package errors.

    Attributes:
        exit_code (int): process exit code used by the command line.
    """

    exit_code = 4


class InvariantViolationError(SharpcalError, ValueError):
    """A type invariant does not hold.

    Attributes:
        violations (list): one message per failed invariant.
    """

    exit_code = 1

    violations: List[str]

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ArgumentError(SharpcalError, ValueError):
    """An argument is outside its documented range"""

    exit_code = 2


class ParseError(SharpcalError, ValueError):
    """Input could not be parsed into a document"""

    exit_code = 2


class NotCalibratedError(SharpcalError):
    """The finite calibration hypothesis fails for a scenario.

    Attributes:
        report: CalibrationReport that failed the tolerance.
    """

    exit_code = 3

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"scenario is not calibrated: max |r(p)| = "
            f"{report.max_abs_residual:.6e} > {report.tolerance:.1e}")


class HypothesisError(SharpcalError):
    """A structural hypothesis (bounded support, convergence) fails"""

    exit_code = 3


class NumericError(SharpcalError):
    """A numerical procedure failed or produced an invalid value"""

    exit_code = 4


class UnsupportedDistributionError(NumericError):
    """Moments requested for a law the quadrature cannot handle"""


class InfeasibleCompletionError(NumericError):
    """Calibration completion left the admissible region.

    Attributes:
        p (float): probability where the completion failed.
        reason (str): which check failed.
    """

    def __init__(self, p, reason):
        self.p = float(p)
        self.reason = reason
        super().__init__(f"infeasible completion at p={self.p:.6g}: {reason}")


class SearchFailureError(SharpcalError):
    """The probe search produced no feasible candidate.

    Attributes:
        diagnostics (dict): counts of evaluated and skipped candidates.
    """

    exit_code = 5

    diagnostics: Dict[str, Any]

    def __init__(self, message, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(f"{message} ({self.diagnostics})")
