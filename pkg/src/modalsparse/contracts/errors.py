"""The failure vocabulary every stage reports in.

Edited by hand. The CLI prints ``error[<code>]: <message>`` straight from an
``ErrorPayload``, so a code is part of the command-line surface: scripts that
drive ``modalsparse`` match on it.
"""

from enum import Enum

from pydantic import BaseModel, Field


class ErrorCode(str, Enum):
    """Failure categories.

    A new code may be added at any time; callers must treat unknown codes as a
    generic failure rather than crashing.
    """

    invalid_input = "INVALID_INPUT"
    parse_error = "PARSE_ERROR"
    singular_system = "SINGULAR_SYSTEM"
    no_convergence = "NO_CONVERGENCE"
    unsupported_model = "UNSUPPORTED_MODEL"
    near_multiple_root = "NEAR_MULTIPLE_ROOT"
    grid_mismatch = "GRID_MISMATCH"
    numerical_error = "NUMERICAL_ERROR"
    io_error = "IO_ERROR"
    internal_error = "INTERNAL_ERROR"


class ErrorPayload(BaseModel):
    model_config = {"extra": "forbid"}

    code: ErrorCode
    message: str = Field(description="Single-line, human-readable diagnostic")
    context: dict[str, float | int | str] = Field(
        default_factory=dict,
        description="Where it happened: order, output index, condition estimate",
    )

    def one_line(self) -> str:
        where = ", ".join(f"{key}={value}" for key, value in sorted(self.context.items()))
        suffix = f" ({where})" if where else ""
        return f"error[{self.code.value}]: {self.message}{suffix}"
