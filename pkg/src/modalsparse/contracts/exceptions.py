"""Typed exceptions that carry an ErrorCode and where they happened.

Library code raises these; the CLI turns a caught ModalSparseError straight
into a one-line diagnostic without re-classifying. The sweeps in
``stabilization`` catch the per-order ones (singular solve, root finder) and
record the order as skipped instead of aborting.
"""

from .errors import ErrorCode, ErrorPayload


class ModalSparseError(Exception):
    """Base class for failures with a reportable code.

    Keyword context (``order=``, ``output=``, ``condition=``) is kept on the
    instance and printed after the message.
    """

    code: ErrorCode = ErrorCode.internal_error

    def __init__(self, message: str, **context: float | int | str) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def to_payload(self) -> ErrorPayload:
        return ErrorPayload(code=self.code, message=self.message, context=self.context)

    def __str__(self) -> str:
        return self.to_payload().one_line()


class ValidationError(ModalSparseError):
    code = ErrorCode.invalid_input


class ParseError(ModalSparseError):
    code = ErrorCode.parse_error


class SingularSystemError(ModalSparseError):
    """R_o or D_i is numerically singular.

    For R_o that means degenerate weighting or too few frequency lines; for
    D_i it means the order is too high for what the data supports.
    """

    code = ErrorCode.singular_system


class ConvergenceError(ModalSparseError):
    code = ErrorCode.no_convergence


class UnsupportedModelError(ModalSparseError):
    code = ErrorCode.unsupported_model


class NearMultipleRootError(ModalSparseError):
    """First-order damping sensitivity blows up at a (near) multiple root,
    the closely-spaced-mode regime."""

    code = ErrorCode.near_multiple_root


class GridMismatchError(ModalSparseError):
    code = ErrorCode.grid_mismatch


class NumericalError(ModalSparseError):
    """An internal invariant failed beyond round-off."""

    code = ErrorCode.numerical_error
