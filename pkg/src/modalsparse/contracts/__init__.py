"""File contracts and the failure vocabulary.

The lowest layer: every other package may import it, it imports nobody.
"""

from .errors import ErrorCode, ErrorPayload
from .exceptions import (
    ConvergenceError,
    GridMismatchError,
    ModalSparseError,
    NearMultipleRootError,
    NumericalError,
    ParseError,
    SingularSystemError,
    UnsupportedModelError,
    ValidationError,
)
from .files import (
    FILE_CONTRACT_VERSION,
    FitReport,
    FrfChannel,
    FrfFile,
    MethodReport,
    ModalModelFile,
    ModeRecord,
)

__all__ = [
    "ErrorCode",
    "ErrorPayload",
    "ConvergenceError",
    "GridMismatchError",
    "ModalSparseError",
    "NearMultipleRootError",
    "NumericalError",
    "ParseError",
    "SingularSystemError",
    "UnsupportedModelError",
    "ValidationError",
    "FILE_CONTRACT_VERSION",
    "FitReport",
    "FrfChannel",
    "FrfFile",
    "MethodReport",
    "ModalModelFile",
    "ModeRecord",
]
