"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: format/usage problems exit with 2,
computation failures with 1.
"""


class ExpressiveVCError(Exception):
    """Base class for all library errors"""
    pass


class AudioFormatError(ExpressiveVCError):
    """Raised when a WAV, BNF1 or TSR1 file has a malformed header or payload"""
    pass


class UnsupportedFormatError(ExpressiveVCError):
    """Raised for well-formed files in a codec or bit depth we do not handle"""
    pass


class PreconditionError(ExpressiveVCError, ValueError):
    """Raised when an operation is called outside its documented domain"""
    pass


class ParameterError(ExpressiveVCError, ValueError):
    """Raised for invalid or numerically unsafe parameter sets"""
    pass


class ShapeError(ExpressiveVCError, ValueError):
    """Raised when operand shapes are inconsistent"""
    pass


class UnnormalizableError(ExpressiveVCError):
    """Raised when an f0 track has no voiced frame to normalize over"""
    pass


class UndefinedCorrelationError(ExpressiveVCError):
    """Raised when a Pearson coefficient is undefined (constant input or < 2 points)"""
    pass


class DivergenceError(ExpressiveVCError):
    """Raised when training produces a non-finite loss"""

    def __init__(self, step: int, message: str):
        self.step = step
        super().__init__(f"Non-finite loss at step {step}: {message}")
